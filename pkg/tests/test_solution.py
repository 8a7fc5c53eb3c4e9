import warnings

import numpy as np
import pytest
from scipy import sparse

import grating_pwdg as gp
from grating_pwdg.assembly import DofLayout, LinearSystem, assemble_impedance
from grating_pwdg.basis import FluxParams, PlaneWaveSpace
from grating_pwdg.errors import (
    ConditioningWarning,
    InvalidArgumentError,
    PointOutsideDomainError,
    SingularMatrixError,
)
from grating_pwdg.exact import PlaneWaveBoundaryData
from grating_pwdg.solution import (
    DiscreteSolution,
    error_norms,
    evaluate,
    extend_quasiperiodic,
    sample_field,
    solve,
    solve_system,
    tdg_norm,
    triangle_quadrature,
)

UWVF = FluxParams.uwvf()


def make_system(matrix, rhs):
    n = len(rhs)
    return LinearSystem(matrix=sparse.csr_matrix(matrix),
                        rhs=np.asarray(rhs, complex),
                        layout=DofLayout(p=1, n_elements=n))


class TestSolve:
    def test_identity(self, rng):
        b = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        u, residual, cond = solve(make_system(np.eye(12), b))
        assert np.allclose(u, b)
        assert residual < 1e-14
        assert cond < 10

    def test_random_well_conditioned(self, rng):
        A = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
        A += 10 * np.eye(50)
        x = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        u, residual, _ = solve(make_system(A, A @ x))
        assert residual < 1e-12
        assert np.linalg.norm(u - x) < 1e-10 * np.linalg.norm(x)

    def test_singular_raises(self):
        A = np.zeros((4, 4))
        with pytest.raises(SingularMatrixError):
            solve(make_system(A, np.ones(4)))

    def test_conditioning_warning_at_high_p(self, eight_mesh):
        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 27)
        wave = PlaneWaveBoundaryData(10.0, np.array([1.0, 0.0]))
        system = assemble_impedance(eight_mesh, space, UWVF, g_r=wave)
        with pytest.warns(ConditioningWarning):
            solve(system)

    def test_sparse_path_above_dense_limit(self, rng):
        n = 2100
        diags = 4.0 + rng.standard_normal(n) * 0.1 + 1j * 0.2
        A = sparse.diags(diags).tocsr()
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        system = LinearSystem(matrix=A, rhs=A @ x,
                              layout=DofLayout(p=1, n_elements=n))
        u, residual, cond = solve(system)
        assert residual < 1e-12
        assert np.linalg.norm(u - x) < 1e-9 * np.linalg.norm(x)


@pytest.fixture
def simple_solution(eight_mesh):
    space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 4)
    coeffs = np.zeros(32, dtype=complex)
    coeffs[4 * 2 + 1] = 1.0  # element 2, direction index 1
    layout = DofLayout(p=4, n_elements=8)
    return DiscreteSolution(coeffs, eight_mesh, space, layout)


class TestEvaluate:
    def test_single_dof_plane_wave(self, simple_solution, eight_mesh):
        space = simple_solution.space
        v = eight_mesh.element_vertices(2).mean(axis=0)
        value, grad = evaluate(simple_solution, v)
        d = space.directions[1]
        expect = np.exp(1j * 10.0 * (v @ d))
        assert abs(value - expect) < 1e-14
        assert np.allclose(grad, 1j * 10.0 * d * expect)

    def test_gradient_finite_differences(self, eight_mesh, rng):
        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 5)
        coeffs = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        sol = DiscreteSolution(coeffs, eight_mesh, space,
                               DofLayout(p=5, n_elements=8))
        h = 1e-6
        hits = 0
        for _ in range(40):
            x = rng.uniform((0.02, -0.48), (0.98, 0.48))
            e = eight_mesh.locate(x)
            # keep away from element boundaries so the stencil stays inside
            if any(eight_mesh.locate(x + s) != e for s in
                   ((h, 0), (-h, 0), (0, h), (0, -h))):
                continue
            hits += 1
            _, grad = evaluate(sol, x)
            fd = np.array([
                (evaluate(sol, x + [h, 0])[0] - evaluate(sol, x - [h, 0])[0])
                / (2 * h),
                (evaluate(sol, x + [0, h])[0] - evaluate(sol, x - [0, h])[0])
                / (2 * h),
            ])
            assert np.linalg.norm(grad - fd) < 1e-6 * max(
                1.0, np.linalg.norm(grad))
            if hits >= 20:
                break
        assert hits >= 10

    def test_outside_raises(self, simple_solution):
        with pytest.raises(PointOutsideDomainError):
            evaluate(simple_solution, np.array([5.0, 0.0]))


class TestTriangleQuadrature:
    def test_order_one(self):
        bary, w = triangle_quadrature(1)
        assert len(w) == 1
        assert abs(w[0] - 0.5) < 1e-15

    @pytest.mark.parametrize("order", [1, 2, 4, 10, 32])
    def test_weights_sum_to_half(self, order):
        _, w = triangle_quadrature(order)
        assert abs(np.sum(w) - 0.5) < 1e-14

    def test_monomial_x2y(self):
        bary, w = triangle_quadrature(4)
        x = bary[:, 1]
        y = bary[:, 2]
        assert abs(np.sum(w * x ** 2 * y) - 1.0 / 60.0) < 1e-14

    @pytest.mark.parametrize("order", [0, 33])
    def test_out_of_range(self, order):
        with pytest.raises(InvalidArgumentError):
            triangle_quadrature(order)


class TestErrorNorms:
    def test_self_comparison_is_zero(self, eight_mesh, rng):
        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 3)
        coeffs = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        sol = DiscreteSolution(coeffs, eight_mesh, space,
                               DofLayout(p=3, n_elements=8))
        from grating_pwdg.solution import solution_as_exact

        report = error_norms(sol, solution_as_exact(sol), order=6)
        scale = np.linalg.norm(coeffs)
        assert report.l2_abs < 1e-13 * scale
        assert report.h1_semi_abs < 1e-12 * scale

    def test_constant_against_zero(self):
        iface = gp.two_layer_interface(1.0)
        mesh = gp.generate_periodic_mesh(iface, 3.0, 1.5)
        space = PlaneWaveSpace.for_mesh(mesh, iface.region_eps, 1.0, 3)
        sol = DiscreteSolution(np.zeros(mesh.n_elements * 3, complex), mesh,
                               space, DofLayout(p=3, n_elements=mesh.n_elements))

        def one(points):
            return (np.ones(len(points), complex),
                    np.zeros((len(points), 2), complex))

        report = error_norms(sol, one, order=4)
        assert abs(report.l2_abs - np.sqrt(12 * np.pi)) < 1e-12
        assert report.l2_rel == pytest.approx(1.0)

    def test_order_doubling_stable(self, eight_mesh):
        # converged case (error well above roundoff): the reported value moves
        # by < 0.1% when the quadrature order doubles
        from grating_pwdg.exact import circular_wave, impedance_data_from_exact

        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 13)

        def exact(points):
            return circular_wave(points, 1.0, 10.0)

        system = assemble_impedance(eight_mesh, space, UWVF,
                                    g_r=impedance_data_from_exact(exact))
        sol, _, _ = solve_system(system, eight_mesh, space)
        coarse = error_norms(sol, exact, order=10)
        fine = error_norms(sol, exact, order=20)
        assert fine.l2_abs > 1e-8
        assert abs(coarse.l2_abs - fine.l2_abs) <= 1e-3 * fine.l2_abs

    def test_swap_symmetry_of_absolute_errors(self, eight_mesh, rng):
        from grating_pwdg.solution import solution_as_exact

        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 3)
        c1 = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        c2 = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        layout = DofLayout(p=3, n_elements=8)
        s1 = DiscreteSolution(c1, eight_mesh, space, layout)
        s2 = DiscreteSolution(c2, eight_mesh, space, layout)
        r12 = error_norms(s1, solution_as_exact(s2), order=8)
        r21 = error_norms(s2, solution_as_exact(s1), order=8)
        assert abs(r12.l2_abs - r21.l2_abs) < 1e-10 * r12.l2_abs
        assert abs(r12.h1_semi_abs - r21.h1_semi_abs) < 1e-10 * r12.h1_semi_abs


class TestTdgNorm:
    def test_zero_vector(self, eight_mesh):
        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 3)
        sol = DiscreteSolution(np.zeros(24, complex), eight_mesh, space,
                               DofLayout(p=3, n_elements=8))
        assert tdg_norm(sol, "TDG", UWVF) == 0.0

    def test_positive_for_nonzero(self, eight_mesh, rng):
        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 3)
        coeffs = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        sol = DiscreteSolution(coeffs, eight_mesh, space,
                               DofLayout(p=3, n_elements=8))
        assert tdg_norm(sol, "TDG", UWVF) > 0.1

    def test_zero_rhs_solves_to_zero(self, eight_mesh):
        # uniqueness: A w = 0 has only the trivial solution
        space = PlaneWaveSpace.for_mesh(eight_mesh, {0: 1.0}, 10.0, 5)
        system = assemble_impedance(eight_mesh, space, UWVF)
        sol, _, _ = solve_system(system, eight_mesh, space)
        assert np.linalg.norm(sol.coefficients) < 1e-12
        assert tdg_norm(sol, "TDG", UWVF) < 1e-12

    def test_requires_flux(self, simple_solution):
        with pytest.raises(InvalidArgumentError):
            tdg_norm(simple_solution, "TDG")

    def test_tdg_t_requires_spec(self, simple_solution):
        with pytest.raises(InvalidArgumentError):
            tdg_norm(simple_solution, "TDG_T", UWVF)


class TestExtension:
    @pytest.fixture
    def dtn_solution(self):
        from grating_pwdg.scenarios import RunConfig, build_problem

        cfg = RunConfig(method="dtn", scenario="two_layer", k=2.0,
                        theta=-np.pi / 4, eps2=1.5, h_target=1.5, H=2.0,
                        M=20).validate()
        problem = build_problem(cfg, p=7)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sol, _, _ = solve_system(problem.system, problem.mesh,
                                     problem.space)
        return sol, cfg.k * np.cos(cfg.theta)

    def test_zero_copy_matches_evaluate(self, dtn_solution, rng):
        sol, alpha0 = dtn_solution
        sampler = extend_quasiperiodic(sol, alpha0, copies=(0, 0))
        for _ in range(10):
            x = rng.uniform((0.1, -1.9), (6.1, 1.9))
            assert abs(sampler(x) - evaluate(sol, x)[0]) < 1e-14

    def test_quasi_periodic_ratio(self, dtn_solution, rng):
        sol, alpha0 = dtn_solution
        sampler = extend_quasiperiodic(sol, alpha0, copies=(-1, 1))
        phase = np.exp(1j * alpha0 * 2 * np.pi)
        for _ in range(10):
            x = rng.uniform((0.1, -1.9), (6.1, 1.9))
            v0 = sampler(x)
            v1 = sampler(x + [2 * np.pi, 0.0])
            if abs(v0) > 1e-12:
                assert abs(v1 / v0 - phase) < 1e-10

    def test_modulus_periodic(self, dtn_solution, rng):
        sol, alpha0 = dtn_solution
        sampler = extend_quasiperiodic(sol, alpha0, copies=(-1, 1))
        for _ in range(10):
            x = rng.uniform((0.1, -1.9), (6.1, 1.9))
            assert abs(abs(sampler(x + [2 * np.pi, 0]))
                       - abs(sampler(x))) < 1e-10

    def test_outside_vertical_range(self, dtn_solution):
        sol, alpha0 = dtn_solution
        sampler = extend_quasiperiodic(sol, alpha0, copies=(0, 0))
        with pytest.raises(PointOutsideDomainError):
            sampler(np.array([1.0, 5.0]))

    def test_sample_field_extends(self, dtn_solution):
        sol, alpha0 = dtn_solution
        xs, ys, values = sample_field(sol, (31, 11), extend=1, alpha0=alpha0)
        assert xs[0] == pytest.approx(-2 * np.pi)
        assert xs[-1] == pytest.approx(4 * np.pi)
        assert np.all(np.isfinite(values))
        # |u| repeats with period 2*pi: compare columns 0 and 20 (x-step pi/5)
        assert np.allclose(np.abs(values[:, 0]), np.abs(values[:, 10]),
                           atol=1e-9)

    def test_sample_field_confined_without_extension(self, dtn_solution):
        sol, _ = dtn_solution
        xs, ys, values = sample_field(sol, (13, 7))
        assert xs[0] == pytest.approx(0.0)
        assert xs[-1] == pytest.approx(2 * np.pi)
        assert ys[0] == pytest.approx(-2.0) and ys[-1] == pytest.approx(2.0)
