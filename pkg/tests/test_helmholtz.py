"""Helmholtz conditions, potentials, metrizability and the obstruction rank."""

import itertools

import numpy as np
import pytest

from varinverse import fn_calculus as fn
from varinverse.catalog import builtin, riemannian_spray
from varinverse.fn_calculus import FormField
from varinverse.geometry import Semispray, tangent_structure
from varinverse.helmholtz import (
    NO_OBSTRUCTION,
    NOT_LAGRANGIAN,
    ONLY_DEGENERATE,
    ConditionName as C,
    NotFlat,
    NotHomogeneous,
    NotSemiBasic,
    NotSpray,
    PreconditionFailed,
    ZeroDegree,
    check_lagrangian,
    constraint_matrix,
    finsler_metrizability_check,
    g_rank,
    hamel_check,
    helmholtz_residuals,
    homogeneous_check,
    multiplier_data,
    multiplier_residuals,
    obstruction_rank,
    potential,
    projective_metrizability_check,
)
from varinverse.helmholtz.obstruction import family, sym_basis, sym_matrix
from varinverse.sampling import sample_points
from varinverse.symbolic import InsufficientSamples, evaluate, parse_expr

from conftest import fd_partial, random_semibasic_forms

FOUR = (C.DhTheta, C.DJTheta, C.NablaDTheta, C.DPhiTheta)


def dJ(n, text):
    return fn.d_A(tangent_structure(n), FormField.scalar(parse_expr(text, n), n))


def test_flat_energy_all_four_vanish(flat, flat_samples):
    r = helmholtz_residuals(flat.spray, flat.candidate("energy").theta(2), flat_samples)
    assert r.verdict == "pass"
    assert all(r.residual(c) <= 1e-12 for c in FOUR)


def test_asymmetric_form_fails_only_dJ(flat, flat_samples):
    r = helmholtz_residuals(flat.spray, flat.candidate("asym").theta(2), flat_samples)
    assert r.verdict == "fail"
    assert [c.name for c in r.failing()] == [C.DJTheta]
    # d_J(y2 dx1) = dy2 ^ dx1, whose frame component has magnitude 1
    assert r.residual(C.DJTheta) == pytest.approx(1.0)
    assert not r.condition(C.ClosedLSTheta).passed


def test_not_semibasic_rejected(flat, flat_samples):
    with pytest.raises(NotSemiBasic):
        helmholtz_residuals(flat.spray, fn.one_form(2, ["y1", "0", "x1", "0"]), flat_samples)


def test_too_few_samples(flat):
    with pytest.raises(InsufficientSamples):
        helmholtz_residuals(flat.spray, flat.candidate("energy").theta(2), flat.samples(10))


@pytest.mark.parametrize("name", ["flat2d", "poincare-halfplane", "damped1d", "warped2d"])
def test_catalog_expected_check_verdicts(name):
    P = builtin(name)
    s = P.samples()
    for c in P.candidates:
        exp = (c.expected or {}).get("check")
        if exp is None:
            continue
        r = helmholtz_residuals(P.spray, c.theta(P.n), s)
        assert r.verdict == exp, (name, c.name)


def test_damped_multiplier_matches_one_over_y():
    P = builtin("damped1d")
    s = P.samples()
    data = multiplier_data(P.spray, P.candidate("log").theta(1))
    assert np.allclose(evaluate(data.g[0][0], s), 1 / s.Y[:, 0])
    assert np.abs(evaluate(data.nabla_g[0][0], s)).max() <= 1e-12


# ---------------------------------------------------------------------------
# multiplier route


def test_multiplier_flat_energy(flat, flat_samples):
    rep, data = multiplier_residuals(flat.spray, flat.candidate("energy").theta(2), flat_samples)
    assert rep.passed
    g = [[evaluate(e, flat_samples) for e in row] for row in data.g]
    assert np.allclose(g, np.eye(2)[:, :, None] * np.ones(flat_samples.m))
    assert fn.max_abs([e for row in data.a for e in row], flat_samples)[0] == 0.0
    assert fn.max_abs([e for row in data.nabla_g for e in row], flat_samples)[0] == 0.0


def test_multiplier_halfplane_metric_and_fd_covariant_derivative(halfplane, hp_samples):
    S, s = halfplane.spray, hp_samples
    rep, data = multiplier_residuals(S, halfplane.candidate("energy").theta(2), s)
    assert rep.passed
    x2 = s.X[:, 1]
    for i, j in itertools.product(range(2), repeat=2):
        assert np.allclose(evaluate(data.g[i][j], s), (i == j) / x2**2, atol=1e-12)
    # oracle: nabla g = S(g) - N^T g - g N with S(g) by finite differences along the flow
    field = fn.vector_values(S.field, s)
    N = np.array([[evaluate(S.N[i][j], s) for j in range(2)] for i in range(2)])
    for i, j in itertools.product(range(2), repeat=2):
        gij = data.g[i][j]
        f = lambda X, Y: evaluate(gij, type(s)(X, Y, y_min=0.0))
        Sg = sum(field[:, a] * fd_partial(f, s.X, s.Y, a) for a in range(4))
        gm = np.array([[evaluate(data.g[p][q], s) for q in range(2)] for p in range(2)])
        fd_nabla = Sg - sum(N[k, i] * gm[k, j] for k in range(2)) - sum(N[k, j] * gm[i, k] for k in range(2))
        assert np.abs(fd_nabla).max() <= 1e-8


@pytest.mark.parametrize("spray_name", ["flat2d", "poincare-halfplane"])
def test_theorem_equivalence_and_route_agreement_on_random_forms(spray_name):
    P = builtin(spray_name)
    s = P.samples()
    forms = random_semibasic_forms(2, 50, seed=2024)
    forms += [c.theta(2) for c in P.candidates if c.kind != "ZeroHomogFunction"]
    verdicts = []
    for theta in forms:
        r = helmholtz_residuals(P.spray, theta, s, tol=1e-9, closed_tol=1e-8)
        four = all(r.condition(c).passed for c in FOUR)
        assert four == r.condition(C.ClosedLSTheta).passed
        m, _ = multiplier_residuals(P.spray, theta, s, tol=1e-9, intrinsic=r)
        assert m.passed == r.passed
        verdicts.append(four)
    assert any(verdicts) and not all(verdicts)


# ---------------------------------------------------------------------------
# homogeneous reductions and potentials


def test_reduced_branches_and_omitted_conditions(flat, halfplane):
    s = halfplane.samples()
    r = homogeneous_check(halfplane.spray, halfplane.candidate("energy").theta(2), s)
    assert r.mode == "k=2 reduced" and r.passed
    assert not r.condition(C.DPhiTheta).required and r.residual(C.DPhiTheta) <= 1e-8
    sf = flat.samples()
    r = homogeneous_check(flat.spray, flat.candidate("norm").theta(2), sf)
    assert r.mode == "k=1 reduced" and r.passed
    for c in (C.NablaDTheta, C.DPhiTheta):
        assert not r.condition(c).required and r.residual(c) <= 1e-8


def test_homogeneous_check_errors(flat, flat_samples, damped):
    with pytest.raises(ZeroDegree):
        homogeneous_check(flat.spray, dJ(2, "y1^2 + y2^2"), flat_samples, k=0)
    with pytest.raises(NotHomogeneous):
        homogeneous_check(flat.spray, fn.semibasic_form(2, ["y1 + y2^2", "0"]), flat_samples)
    with pytest.raises(NotSpray):
        homogeneous_check(damped.spray, damped.candidate("log").theta(1), damped.samples())


def test_minus_one_branch_requires_all_four(flat, flat_samples):
    theta = dJ(2, "1/sqrt(y1^2 + y2^2)")
    r = homogeneous_check(flat.spray, theta, flat_samples)
    assert r.homogeneity_degree == -2
    theta = fn.semibasic_form(2, ["1/(y1^2 + y2^2)", "0"])
    r = homogeneous_check(flat.spray, theta, flat_samples, k=-1)
    assert r.mode == "k=-1 full" and all(r.condition(c).required for c in FOUR)


FIXTURES = [
    ("flat2d", "energy", 2),
    ("flat2d", "norm", 1),
    ("poincare-halfplane", "energy", 2),
    ("poincare-halfplane", "norm", 1),
]


@pytest.mark.parametrize("name,cand,k", FIXTURES)
def test_potential_recovers_generating_lagrangian(name, cand, k):
    P = builtin(name)
    s = P.samples()
    c = P.candidate(cand)
    theta = c.theta(2)
    L = potential(P.spray, theta, k, s)
    assert np.abs(evaluate(L, s) - evaluate(c.scalar, s)).max() <= 1e-12
    back = fn.d_A(P.spray.J, FormField.scalar(L, 2)) - theta
    assert fn.max_abs(back, s)[0] <= 1e-10
    euler = fn.directional(P.spray.liouville, L) - k * L
    assert fn.max_abs(euler, s)[0] <= 1e-8


@pytest.mark.parametrize("text,k", [("y1^2 + y2^2", 2), ("sqrt(y1^2 + 2*y2^2)", 1), ("y1^3/(y1^2 + y2^2)", 1)])
def test_potential_does_not_depend_on_spray(text, k):
    s = sample_points(2, 20, box_x=[[-1, 1], [0.5, 2]])
    theta = dJ(2, text)
    a = potential(builtin("flat2d").spray, theta, k, s)
    b = potential(builtin("poincare-halfplane").spray, theta, k, s)
    assert np.abs(evaluate(a, s) - evaluate(b, s)).max() <= 1e-10


def test_potential_preconditions(flat, flat_samples, damped):
    with pytest.raises(ZeroDegree):
        potential(flat.spray, dJ(2, "y1^2"), 0, flat_samples)
    with pytest.raises(PreconditionFailed):
        potential(flat.spray, flat.candidate("asym").theta(2), 2, flat_samples)
    with pytest.raises(PreconditionFailed):
        potential(flat.spray, dJ(2, "y1^2 + y2^2"), 1, flat_samples)
    with pytest.raises(NotSpray):
        potential(damped.spray, damped.candidate("log").theta(1), 1, damped.samples())


def test_sarlet_property_on_passing_forms(flat, halfplane):
    for P in (flat, halfplane):
        s = P.samples()
        S = P.spray
        for c in P.candidates:
            if c.kind == "ZeroHomogFunction":
                continue
            theta = c.theta(2)
            if not helmholtz_residuals(S, theta, s).passed:
                continue
            omega = fn.lie_derivative_form(S.field, theta)
            back = fn.lie_derivative_form(S.field, fn.inner(S.J, omega))
            assert fn.max_abs(back - omega, s)[0] <= 1e-10


# ---------------------------------------------------------------------------
# Lagrangians and metrizability


def test_check_lagrangian(flat, flat_samples, halfplane, warped):
    assert check_lagrangian(flat.spray, parse_expr("x1*y1", 2), flat_samples).passed  # null Lagrangian
    r = check_lagrangian(flat.spray, parse_expr("x1*y1^2", 2), flat_samples)
    assert not r.passed and r.consistent
    assert check_lagrangian(halfplane.spray, halfplane.candidate("energy").scalar, halfplane.samples()).passed
    r = check_lagrangian(warped.spray, warped.candidate("energy").scalar, warped.samples())
    assert r.passed and r.residual(C.EulerLagrange) <= 1e-8


def test_projective_metrizability(flat, flat_samples, halfplane):
    r = projective_metrizability_check(flat.spray, flat.candidate("norm").theta(2), flat_samples)
    assert r.passed
    F = r.potential
    assert np.allclose(evaluate(F, flat_samples), np.linalg.norm(flat_samples.Y, axis=1))
    r = projective_metrizability_check(flat.spray, flat.candidate("asym-norm").theta(2), flat_samples)
    assert not r.passed and r.condition(C.DJTheta).passed is False
    r = projective_metrizability_check(halfplane.spray, halfplane.candidate("norm").theta(2), halfplane.samples())
    assert r.passed and r.residual(C.Rapcsak) <= 1e-8
    with pytest.raises(NotHomogeneous):
        projective_metrizability_check(flat.spray, flat.candidate("energy").theta(2), flat_samples)


def test_finsler_metrizability(flat, flat_samples, halfplane):
    r = finsler_metrizability_check(flat.spray, flat.candidate("energy").theta(2), flat_samples)
    assert r.passed and r.extra["g_rank"] == 2
    r = finsler_metrizability_check(flat.spray, flat.candidate("product").theta(2), flat_samples)
    assert r.passed and r.extra["regular"]
    assert np.allclose(evaluate(r.potential, flat_samples), flat_samples.Y[:, 0] * flat_samples.Y[:, 1])
    r = finsler_metrizability_check(halfplane.spray, halfplane.candidate("energy").theta(2), halfplane.samples())
    assert r.passed and r.residual(C.DhL) <= 1e-10
    assert g_rank(parse_expr("y1^2", 2), 2, flat_samples) == 1


def test_hamel_fixtures(flat, flat_samples, halfplane):
    r = hamel_check(flat.spray, flat.candidate("hamel").scalar, flat_samples)
    assert r.passed
    assert np.allclose(evaluate(r.potential, flat_samples), flat_samples.Y.sum(axis=1))
    r = hamel_check(flat.spray, flat.candidate("hamel-constant").scalar, flat_samples)
    assert r.passed and r.notes and "degenerate" in r.notes[0]
    with pytest.raises(NotFlat):
        hamel_check(halfplane.spray, parse_expr("x1", 2), halfplane.samples())
    with pytest.raises(NotHomogeneous):
        hamel_check(flat.spray, parse_expr("y1", 2), flat_samples)


def test_hamel_surrogate_verdict_fixed_by_finite_differences(flat, flat_samples):
    f = flat.candidate("hamel-surrogate").scalar
    s = flat_samples
    fun = lambda X, Y: evaluate(f, type(s)(X, Y, y_min=0.0))

    def mixed(a, b, h=1e-4):
        return fd_partial(lambda X, Y: fd_partial(fun, X, Y, b, h), s.X, s.Y, a, h)

    # d^2 f / dy^1 dx^2 - d^2 f / dy^2 dx^1
    asym = np.abs(mixed(2, 1) - mixed(3, 0)).max()
    oracle_pass = asym <= 1e-6
    r = hamel_check(flat.spray, f, s)
    assert r.passed == oracle_pass
    assert r.passed == (flat.candidate("hamel-surrogate").expected["hamel"] == "pass")


# ---------------------------------------------------------------------------
# obstruction


def test_obstruction_flat_is_unconstrained(flat, flat_samples):
    for rep in obstruction_rank(flat.spray, flat_samples):
        assert rep.rank == 0 and rep.solution_dim == 3 and rep.verdict == NO_OBSTRUCTION


def test_obstruction_halfplane_known_solution(halfplane, hp_samples):
    reps = obstruction_rank(halfplane.spray, hp_samples)
    for rep in reps:
        assert rep.solution_dim >= 1 and rep.verdict == NO_OBSTRUCTION
        x2 = rep.point.x[1]
        assert rep.residual(np.eye(2) / x2**2) <= 1e-9


def test_distinct_eigenvalues_give_full_rank_from_phi_alone(halfplane, hp_samples):
    S = halfplane.spray
    M = fn.matrix_values(S.phi, hp_samples)[:, 2:, :2]
    reps = obstruction_rank(S, hp_samples, order=0)
    for blk, rep in zip(M, reps):
        ev = np.linalg.eigvals(blk)
        if abs(ev[0] - ev[1]) > 1e-6:
            assert rep.rank == 1  # n(n-1)/2 for n = 2


def test_obstruction_detects_non_lagrangian_semispray():
    S = Semispray.from_strings(["y2^3", "x1*y1"], "cubic")
    reps = obstruction_rank(S, sample_points(2, 8))
    assert all(r.verdict == NOT_LAGRANGIAN and r.solution_dim == 0 for r in reps)


def test_obstruction_degenerate_only_is_flagged_heuristic():
    # a 2-D spray whose only solutions are rank-one multipliers
    S = Semispray.from_strings(["y1*y2", "x1*y1^2"], "deg")
    for r in obstruction_rank(S, sample_points(2, 8)):
        assert r.verdict == ONLY_DEGENERATE and r.heuristic
        g = sym_matrix(r.null_basis[:, 0], 2)
        assert abs(np.linalg.det(g)) <= 1e-10 * np.abs(g).max() ** 2


def test_constraint_matrix_against_interior_products():
    """Rows of the assembled matrix equal i_A and i_R of the 2-forms 2 E_ij dy^j ^ dx^i."""
    n = 3
    S = riemannian_spray([["1", "0", "0"], ["0", "exp(x1)", "0"], ["0", "0", "x1^2 + 1 + x2^2"]])
    s = sample_points(n, 3, seed=4)
    fam = family(S, 1)
    mats = [fn.matrix_values(A, s) for A in fam]
    Rv = fn.component_values(S.R, s)
    for p in range(s.m):
        R = np.zeros((n, n, n))
        for (a, (i, j)), v in Rv.items():
            if a >= n and j < n:
                R[a - n, i, j], R[a - n, j, i] = v[p], -v[p]
        M = constraint_matrix([m[p, n:, :n] for m in mats], R, n)
        sub = s.subset([p])
        for col, E in enumerate(sym_basis(n)):
            omega = FormField(n, 2, {(n + j, i): 2 * E[i, j] for i in range(n) for j in range(n) if E[i, j]})
            want = []
            for A in fam:
                w = fn.inner(A, omega)
                want += [0.5 * evaluate(w[(i, j)], sub)[0] for i, j in itertools.combinations(range(n), 2)]
            w = fn.inner(S.R, omega)
            want += [0.5 * evaluate(w[(i, j, l)], sub)[0] for i, j, l in itertools.combinations(range(n), 3)]
            assert np.allclose(M[:, col], want, atol=1e-10)


def test_three_dimensional_metric_has_no_obstruction():
    S = riemannian_spray([["1", "0", "0"], ["0", "exp(x1)", "0"], ["0", "0", "x1^2 + 1"]])
    s = sample_points(3, 6, seed=8)
    for rep in obstruction_rank(S, s):
        x1 = rep.point.x[0]
        assert rep.verdict == NO_OBSTRUCTION
        assert rep.residual(np.diag([1, np.exp(x1), x1**2 + 1])) <= 1e-9


def test_report_json_shape(flat, flat_samples):
    r = helmholtz_residuals(flat.spray, flat.candidate("asym").theta(2), flat_samples)
    d = r.to_dict()
    assert d["report_version"] == 1 and d["verdict"] == "fail"
    assert {"name", "max_abs", "scale", "pass", "argmax_point"} <= set(d["conditions"][0])
    fail = next(c for c in d["conditions"] if c["name"] == "DJTheta")
    assert set(fail["argmax_point"]) == {"x", "y"}
