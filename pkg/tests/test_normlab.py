"""Numerical seminorm probes: quadrature sanity and scaling laws."""

import math
from fractions import Fraction as F

import numpy as np
import pytest

from anisocalc import (SCALARS, MultInstance, SpaceDescr, isotropic,
                       parabolic)
from anisocalc.errors import (ResolutionError, UncoveredInstance, WrongScale)
from anisocalc.normlab import (GaussianSpec, GridFunction,
                               check_product_estimate,
                               dilation_scaling_exponent, full_norm,
                               seminorm_besov, seminorm_slobodeckij)

ISO1 = isotropic(1)
W12 = SpaceDescr.sobolev(F(1, 2), F(1, 2), ISO1, SCALARS, "R^1")
W34 = SpaceDescr.sobolev(F(3, 4), F(1, 2), ISO1, SCALARS, "R^1")
B12 = SpaceDescr.besov(F(1, 2), F(1, 2), ISO1, None, SCALARS, "R^1")


def _gauss(dx=0.02, radius=12.0, sigma=1.0):
    return GaussianSpec((sigma,)).sample((1,), (dx,), radius)


def test_zero_function_has_zero_seminorm():
    u = _gauss()
    zero = GridFunction(u.slice_dims, u.spacings,
                        np.zeros_like(u.samples), u.decay_radius)
    assert seminorm_slobodeckij(zero, W12).value == 0.0
    assert seminorm_besov(zero, B12).value == 0.0


def test_homogeneity():
    u = _gauss()
    base = seminorm_slobodeckij(u, W12).value
    for c in (3.0, -0.25):
        scaled = GridFunction(u.slice_dims, u.spacings, c * u.samples,
                              u.decay_radius)
        got = seminorm_slobodeckij(scaled, W12).value
        assert abs(got - abs(c) * base) <= 1e-9 * abs(c) * base


def test_translation_invariance():
    u = _gauss()
    base = seminorm_slobodeckij(u, W12).value
    shifted = GridFunction(u.slice_dims, u.spacings,
                           np.roll(u.samples, 37), u.decay_radius)
    got = seminorm_slobodeckij(shifted, W12).value
    assert abs(got - base) <= 1e-6 * base


def test_known_gaussian_value():
    # closed form for the unit Gaussian: the squared seminorm integrates to
    # 2 pi, up to the reported truncation
    res = seminorm_slobodeckij(_gauss(), W12)
    exact = math.sqrt(2 * math.pi)
    assert abs(res.value - exact) <= 0.05 * exact
    assert res.truncation_error_estimate > 0


def test_quadrature_convergence_under_halving():
    coarse = seminorm_slobodeckij(_gauss(dx=0.04), W12).value
    fine = seminorm_slobodeckij(_gauss(dx=0.02), W12).value
    assert abs(fine - coarse) <= 0.02 * coarse


def test_resolution_guard():
    u = GaussianSpec((1.0,)).sample((1,), (1.0,), 2.0)
    with pytest.raises(ResolutionError):
        seminorm_slobodeckij(u, W12)


def test_integer_slice_ratio_refused():
    w1 = SpaceDescr.sobolev(F(1), F(1, 2), ISO1, SCALARS, "R^1")
    with pytest.raises(WrongScale):
        seminorm_slobodeckij(_gauss(), w1)


def test_wrong_scale_refused():
    with pytest.raises(WrongScale):
        seminorm_slobodeckij(_gauss(), B12)
    with pytest.raises(WrongScale):
        seminorm_besov(_gauss(), W12)


def test_dilation_scaling_isotropic():
    lams = [0.25, 0.5, 1.0, 2.0, 4.0]
    slope, _ = dilation_scaling_exponent(W12, GaussianSpec((1.0,)), lams,
                                         (0.02,), 20.0)
    assert abs(slope - 0.0) <= 0.1
    slope34, _ = dilation_scaling_exponent(W34, GaussianSpec((1.0,)), lams,
                                           (0.02,), 20.0)
    assert abs(slope34 - 0.25) <= 0.1


def test_dilation_scaling_parabolic():
    # weights (2, 1) over a 2-dimensional product: exponent is
    # lcm(w) * ind = s - 3/p
    aniso = parabolic(1)
    sp = SpaceDescr.sobolev(F(1, 2), F(1, 2), aniso, SCALARS, "JxSigma")
    expect = float(F(1, 2) - F(3, 2))
    slope, _ = dilation_scaling_exponent(sp, GaussianSpec((1.0, 1.0)),
                                         [0.5, 1.0, 2.0], (0.05, 0.05), 6.0)
    assert abs(slope - expect) <= 0.1 * abs(expect)


def test_besov_slobodeckij_equivalence_ratio():
    # at micro-scale = integrability the two quadratures define equivalent
    # norms; the ratio stays within one order of magnitude across
    # resolutions
    for dx in (0.08, 0.056, 0.04, 0.028, 0.02):
        u = _gauss(dx=dx)
        w = seminorm_slobodeckij(u, W12).value
        b = seminorm_besov(u, B12).value
        assert 0.1 <= b / w <= 10.0


def test_hoelder_probe():
    a = isotropic(1)
    l4 = SpaceDescr.lebesgue(F(1, 4), a, SCALARS, "R^1")
    l2 = SpaceDescr.lebesgue(F(1, 2), a, SCALARS, "R^1")
    inst = MultInstance.of((l4, l4), l2)
    fam = []
    for k in range(10):
        u = GaussianSpec((1.0 + 0.1 * k,), (0.3 * k,)).sample((1,), (0.05,), 10.0)
        v = GaussianSpec((1.5,), (0.2 * k,), phase="sin").sample((1,), (0.05,), 10.0)
        fam.append((u, v))
    stats = check_product_estimate(inst, fam)
    assert stats.max_ratio <= 1 + 1e-6


def test_product_probe_refuses_uncovered():
    a = isotropic(1)
    l4 = SpaceDescr.lebesgue(F(1, 4), a, SCALARS, "R^1")
    l3 = SpaceDescr.lebesgue(F(1, 3), a, SCALARS, "R^1")
    inst = MultInstance.of((l4, l4), l3)
    with pytest.raises(UncoveredInstance):
        check_product_estimate(inst, [])


def test_product_probe_modulated_family_bounded():
    # a covered within-scale product: ratios stay bounded as the modulation
    # frequency grows
    a = isotropic(1)
    w = SpaceDescr.sobolev(F(3, 4), F(1, 4), a, SCALARS, "R^1")   # ind = 1/2
    tgt = SpaceDescr.sobolev(F(1, 2), F(1, 2), a, SCALARS, "R^1")  # ind = 0
    inst = MultInstance.of((w, w), tgt)
    fam = []
    for freq in (1.0, 2.0, 4.0, 8.0, 16.0):
        u = GaussianSpec((1.0,), (freq,)).sample((1,), (0.02,), 10.0)
        v = GaussianSpec((1.0,), (freq,), phase="sin").sample((1,), (0.02,), 10.0)
        fam.append((u, v))
    stats = check_product_estimate(inst, fam)
    assert stats.growth <= 20.0


def test_unit_factor_product_is_exact():
    # multiplying by the constant unit leaves the norm unchanged, which is
    # what the reduced multiplication asserts
    u = _gauss(dx=0.05, radius=8.0)
    ones = GridFunction(u.slice_dims, u.spacings, np.ones_like(u.samples),
                        u.decay_radius)
    prod = GridFunction(u.slice_dims, u.spacings, u.samples * ones.samples,
                        u.decay_radius)
    l2 = SpaceDescr.lebesgue(F(1, 2), ISO1, SCALARS, "R^1")
    assert full_norm(prod, l2) == full_norm(u, l2)


def test_full_norm_dispatch():
    u = _gauss(dx=0.05, radius=8.0)
    l2 = SpaceDescr.lebesgue(F(1, 2), ISO1, SCALARS, "R^1")
    assert full_norm(u, l2) == pytest.approx(math.pi ** 0.25, rel=1e-3)
    assert full_norm(u, W12) > full_norm(u, l2)
    h1 = SpaceDescr.bessel(F(1), F(1, 2), ISO1, SCALARS, "R^1")
    with pytest.raises(WrongScale):
        full_norm(u, h1)
