import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptrobin import (
    Grid,
    GridFunction,
    GridMismatchError,
    cumulative_integral,
    grid_function_from_dict,
    grid_function_to_dict,
    inner_product,
    load_grid_function,
    norm,
    sample,
    save_grid_function,
)
from ptrobin.spectrum import dirichlet_mode, neumann_mode

from .oracles import reference_integral


def as_gf(grid, fn):
    return GridFunction(grid, fn(grid.nodes).astype(complex))


class TestGridBasics:
    def test_nodes_span_interval(self):
        g = Grid(2.0, 4)
        assert g.nodes[0] == 0.0
        assert g.nodes[-1] == 2.0
        assert np.all(np.diff(g.nodes) > 0)

    def test_invalid_grid_rejected(self):
        with pytest.raises(ValueError):
            Grid(-1.0, 16)
        with pytest.raises(ValueError):
            Grid(1.0, 1)

    def test_sample_count_enforced(self):
        g = Grid(1.0, 4)
        with pytest.raises(ValueError):
            GridFunction(g, np.ones(4, dtype=complex))
        with pytest.raises(ValueError):
            GridFunction(g, np.array([1.0, np.nan, 1, 1, 1], dtype=complex))


class TestInnerProduct:
    def test_constant_over_pi(self, grid_pi):
        one = GridFunction.constant(grid_pi, 1.0)
        assert inner_product(one, one) == pytest.approx(math.pi, abs=1e-13)

    def test_first_neumann_mode_normalized(self, grid_pi):
        chi = sample(neumann_mode(1, math.pi), grid_pi)
        # oracle: (2/d) * integral cos^2(pi x / d) dx = 1 exactly
        assert inner_product(chi, chi).real == pytest.approx(1.0, abs=1e-10)

    def test_neumann_dirichlet_cross_term_vanishes(self, grid_pi):
        # oracle: integral of sin(2x)/2 over a full period is 0 exactly
        chi_n = sample(neumann_mode(1, math.pi), grid_pi)
        chi_d = sample(dirichlet_mode(1, math.pi), grid_pi)
        assert abs(inner_product(chi_n, chi_d)) < 1e-10

    def test_grid_mismatch_rejected(self, grid_pi):
        other = GridFunction.constant(Grid(math.pi, 256), 1.0)
        one = GridFunction.constant(grid_pi, 1.0)
        with pytest.raises(GridMismatchError):
            inner_product(one, other)

    @settings(max_examples=30, deadline=None)
    @given(
        re=st.floats(-5, 5, allow_nan=False),
        im=st.floats(-5, 5, allow_nan=False),
    )
    def test_antilinear_in_first_argument(self, re, im):
        grid = Grid(math.pi, 64)
        rng = np.random.default_rng(7)
        f = GridFunction(grid, rng.standard_normal(65) + 1j * rng.standard_normal(65))
        g = GridFunction(grid, rng.standard_normal(65) + 1j * rng.standard_normal(65))
        c = complex(re, im)
        lhs = inner_product(c * f, g)
        rhs = np.conj(c) * inner_product(f, g)
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))

    def test_conjugate_symmetry(self, grid_pi, rng):
        f = GridFunction(grid_pi, rng.standard_normal(513) + 1j * rng.standard_normal(513))
        g = GridFunction(grid_pi, rng.standard_normal(513) + 1j * rng.standard_normal(513))
        assert inner_product(f, g) == pytest.approx(np.conj(inner_product(g, f)), abs=1e-12)


class TestNorm:
    def test_zero_function(self, grid_pi):
        assert norm(GridFunction.constant(grid_pi, 0.0)) == 0.0

    def test_constant(self, grid_pi):
        assert norm(GridFunction.constant(grid_pi, 1.0)) == pytest.approx(math.sqrt(math.pi), abs=1e-13)

    def test_dirichlet_mode_normalized(self, grid_pi):
        chi = sample(dirichlet_mode(1, math.pi), grid_pi)
        assert norm(chi) == pytest.approx(1.0, abs=1e-10)


class TestCumulativeIntegral:
    def test_constant_integrates_to_identity(self, grid_pi):
        one = GridFunction.constant(grid_pi, 1.0)
        running = cumulative_integral(one)
        assert np.allclose(running.values, grid_pi.nodes, atol=1e-13)

    def test_linear_integrand_exact(self, grid_pi):
        f = as_gf(grid_pi, lambda x: x)
        running = cumulative_integral(f)
        assert np.allclose(running.values, grid_pi.nodes**2 / 2.0, rtol=1e-13, atol=1e-13)

    def test_sine_antiderivative(self, grid_pi_fine):
        f = as_gf(grid_pi_fine, np.sin)
        running = cumulative_integral(f)
        expected = 1.0 - np.cos(grid_pi_fine.nodes)
        assert np.max(np.abs(running.values - expected)) < 1e-7

    def test_starts_at_zero_exactly(self, grid_pi, rng):
        f = GridFunction(grid_pi, rng.standard_normal(513) + 1j * rng.standard_normal(513))
        assert cumulative_integral(f).values[0] == 0.0

    def test_linearity_exact(self, grid_pi, rng):
        f = GridFunction(grid_pi, rng.standard_normal(513) + 1j * rng.standard_normal(513))
        g = GridFunction(grid_pi, rng.standard_normal(513) + 1j * rng.standard_normal(513))
        a, b = 2.0 - 1.0j, -0.5 + 3.0j
        lhs = cumulative_integral(a * f + b * g)
        rhs = a * cumulative_integral(f) + b * cumulative_integral(g)
        assert np.allclose(lhs.values, rhs.values, rtol=1e-12, atol=1e-12)


class TestSample:
    def test_constant(self):
        grid = Grid(1.0, 4)
        f = sample(lambda x: np.ones_like(x, dtype=complex), grid)
        assert np.array_equal(f.values, np.ones(5, dtype=complex))

    def test_zero_rate_exponential_is_ones(self):
        grid = Grid(2.0, 8)
        f = sample(lambda x: np.exp(1j * 0.0 * x), grid)
        assert np.array_equal(f.values, np.ones(9, dtype=complex))

    def test_half_period_cosine_endpoint(self):
        d = 3.0
        grid = Grid(d, 16)
        f = sample(lambda x: np.cos(np.pi * x / d).astype(complex), grid)
        assert f.values[-1].real == pytest.approx(-1.0, abs=1e-15)


class TestQuadratureConvergence:
    def test_halving_h_reduces_error_by_at_least_3_5(self):
        d = math.pi
        exact = complex(reference_integral(lambda x: mp.cos(3 * x) * mp.e ** (0.2 * x), d))
        errors = []
        for n in (128, 256, 512):
            grid = Grid(d, n)
            f = as_gf(grid, lambda x: np.cos(3 * x) * np.exp(0.2 * x))
            one = GridFunction.constant(grid, 1.0)
            approx = inner_product(one, f)
            errors.append(abs(approx - exact))
        assert errors[0] / errors[1] >= 3.5
        assert errors[1] / errors[2] >= 3.5


class TestJsonFormat:
    def test_round_trip_preserves_doubles(self, tmp_path, rng):
        grid = Grid(math.pi, 32)
        f = GridFunction(grid, rng.standard_normal(33) + 1j * rng.standard_normal(33))
        path = tmp_path / "f.json"
        save_grid_function(f, path)
        g = load_grid_function(path)
        assert g.grid == f.grid
        assert np.array_equal(g.values, f.values)

    def test_schema_fields(self):
        grid = Grid(2.0, 2)
        f = GridFunction(grid, np.array([1 + 2j, 0j, -1j]))
        payload = grid_function_to_dict(f)
        assert set(payload) == {"d", "n", "values"}
        assert payload["values"] == [[1.0, 2.0], [0.0, 0.0], [0.0, -1.0]]
        assert grid_function_from_dict(json.loads(json.dumps(payload))).values[0] == 1 + 2j

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            grid_function_from_dict({"d": 1.0, "n": 4, "values": [[0.0, 0.0]] * 3})
