"""Shared test utilities: random expression corpus and FD oracles."""

import math

import numpy as np

from h1geom import expr as ex

FUNCS_SAFE = ("sin", "cos", "tanh", "atan", "exp", "sinh", "cosh", "sqrt", "ln", "abs", "tan")


def random_expression(rng, depth=3):
    """Random AST over u, v with bounded depth."""
    roll = rng.random()
    if depth == 0 or roll < 0.30:
        kind = rng.random()
        if kind < 0.45:
            return ex.Num(round(float(rng.uniform(0.1, 2.5)), 3))
        if kind < 0.90:
            return ex.Var("u" if rng.random() < 0.5 else "v")
        return ex.Const("pi" if rng.random() < 0.5 else "e")
    if roll < 0.70:
        op = str(rng.choice(["+", "-", "*", "/", "^"]))
        left = random_expression(rng, depth - 1)
        if op == "^":
            return ex.Bin("^", left, ex.Num(float(rng.integers(2, 4))))
        return ex.Bin(op, left, random_expression(rng, depth - 1))
    if roll < 0.90:
        fn = str(rng.choice(FUNCS_SAFE))
        return ex.Call(fn, random_expression(rng, depth - 1))
    return ex.Unary(random_expression(rng, depth - 1))


def central_partials(tree, u, v, h_scale=1e-6):
    """Finite-difference oracle for both partials (the spec's step rule)."""
    hu = h_scale * max(1.0, abs(u))
    hv = h_scale * max(1.0, abs(v))
    fu_p = ex.evaluate(tree, {"u": u + hu, "v": v})
    fu_m = ex.evaluate(tree, {"u": u - hu, "v": v})
    fv_p = ex.evaluate(tree, {"u": u, "v": v + hv})
    fv_m = ex.evaluate(tree, {"u": u, "v": v - hv})
    return (fu_p - fu_m) / (2.0 * hu), (fv_p - fv_m) / (2.0 * hv)


def corpus_case(rng):
    """One accepted (tree, u, v, fd_u, fd_v) tuple, or None if rejected.

    Rejection keeps the finite-difference oracle honest: all stencil
    values finite and moderate, and the h and h/2 estimates consistent,
    so truncation error sits far below the comparison tolerance.
    """
    tree = random_expression(rng)
    u = float(rng.uniform(-2.0, 2.0))
    v = float(rng.uniform(-2.0, 2.0))
    try:
        center = ex.evaluate(tree, {"u": u, "v": v})
        fd = central_partials(tree, u, v)
        fd_half = central_partials(tree, u, v, h_scale=5e-7)
    except ex.EvalError:
        return None
    values = (center, *fd, *fd_half)
    if not all(math.isfinite(x) for x in values):
        return None
    if abs(center) > 300.0 or max(abs(fd[0]), abs(fd[1])) > 300.0:
        return None
    for full, half in zip(fd, fd_half):
        if abs(full - half) > 2e-7 * max(1.0, abs(full)):
            return None
    return tree, u, v, fd[0], fd[1]


def build_corpus(n, seed=20260808):
    rng = np.random.default_rng(seed)
    cases = []
    attempts = 0
    while len(cases) < n and attempts < 60 * n:
        attempts += 1
        case = corpus_case(rng)
        if case is not None:
            cases.append(case)
    if len(cases) < n:
        raise RuntimeError(f"could only build {len(cases)} of {n} corpus cases")
    return cases


def loglog_slope(xs, ys):
    xs = np.log10(np.asarray(xs, dtype=float))
    ys = np.log10(np.abs(np.asarray(ys, dtype=float)))
    return float(np.polyfit(xs, ys, 1)[0])
