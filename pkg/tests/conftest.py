import numpy as np
import pytest

from varinverse.catalog import builtin
from varinverse.sampling import sample_points

HALFPLANE_BOX = [[-1.0, 1.0], [0.5, 2.0]]


@pytest.fixture(scope="session")
def flat():
    return builtin("flat2d")


@pytest.fixture(scope="session")
def halfplane():
    return builtin("poincare-halfplane")


@pytest.fixture(scope="session")
def damped():
    return builtin("damped1d")


@pytest.fixture(scope="session")
def warped():
    return builtin("warped2d")


@pytest.fixture(scope="session")
def flat_samples(flat):
    return flat.samples()


@pytest.fixture(scope="session")
def hp_samples(halfplane):
    return halfplane.samples()


def fd_partial(f, X, Y, a, h=1e-5):
    """Central difference of a vectorised f(X, Y) along flat coordinate a."""
    n = X.shape[1]
    Xp, Xm, Yp, Ym = X.copy(), X.copy(), Y.copy(), Y.copy()
    if a < n:
        Xp[:, a] += h
        Xm[:, a] -= h
    else:
        Yp[:, a - n] += h
        Ym[:, a - n] -= h
    return (f(Xp, Yp) - f(Xm, Ym)) / (2 * h)


def random_samples(n, count=20, seed=1, **kw):
    return sample_points(n, count, seed, **kw)


def close(a, b, tol):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) <= tol


def coord_names(n):
    return [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]


def rand_poly(rng, names, degree=2, terms=3):
    """Random polynomial with small integer coefficients, as text."""
    out = []
    for _ in range(terms):
        c = int(rng.integers(-3, 4)) or 1
        d = int(rng.integers(0, degree + 1))
        mono = [names[int(rng.integers(len(names)))] for _ in range(d)]
        out.append("*".join([str(c)] + mono))
    return " + ".join(out)


def random_semibasic_forms(n, count, seed):
    """Seeded mix of random semi-basic forms with coefficients of degree <= 2.

    A third are generic, a third are d_J of a cubic Lagrangian and a third
    are quadratic energies; the mix makes both verdicts common.
    """
    from varinverse import fn_calculus as fn
    from varinverse.geometry import tangent_structure
    from varinverse.fn_calculus import FormField
    from varinverse.symbolic import parse_expr

    rng = np.random.default_rng(seed)
    names = coord_names(n)
    forms = []
    for k in range(count):
        kind = k % 3
        if kind == 0:
            coeffs = [rand_poly(rng, names, 2, 3) for _ in range(n)]
            forms.append(fn.semibasic_form(n, coeffs))
        else:
            if kind == 1:
                L = rand_poly(rng, names, 3, 4)
            else:
                ys = names[n:]
                L = " + ".join(f"{int(rng.integers(1, 4))}*{a}*{b}"
                               for i, a in enumerate(ys) for b in ys[i:])
            theta = fn.d_A(tangent_structure(n), FormField.scalar(parse_expr(L, n), n))
            forms.append(theta)
    return forms
