import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from besselindex import specfun, transforms
from besselindex.exceptions import AdmissibilityError, DomainError, ProfileClassError
from besselindex.transforms import COSH_PI, SINH_PI, CoeffSeq, PeriodicProfile, TransformKind

KINDS = [TransformKind.rej(), TransformKind.imj(), TransformKind.lommel(-0.5), TransformKind.lommel(-1.0)]


def even_profile(tail):
    """Even profile with psi(0) = 0 from the coefficients of cos(k u), k >= 1."""
    return PeriodicProfile((-sum(tail),) + tuple(tail))


class TestTransformKind:
    @pytest.mark.parametrize("alias, tag", [("re", "ReJ"), ("REJ", "ReJ"), ("im", "ImJ"), ("ImJ", "ImJ")])
    def test_aliases(self, alias, tag):
        assert TransformKind(alias).tag == tag

    def test_lommel_parameter(self):
        assert TransformKind("lommel", -0.5).mu == -0.5
        assert str(TransformKind.lommel(-0.5)) == "Lommel(mu=-0.5)"

    @pytest.mark.parametrize("tag, mu", [("lommel", None), ("lommel", 0.0), ("lommel", -1.25), ("re", -0.5)])
    def test_parameter_errors(self, tag, mu):
        with pytest.raises(DomainError):
            TransformKind(tag, mu)

    def test_unknown(self):
        with pytest.raises(ValueError):
            TransformKind("hankel")

    @pytest.mark.parametrize("kind, first, adm", [
        (TransformKind.rej(), 0, "weighted"), (TransformKind.imj(), 1, "weighted"),
        (TransformKind.lommel(-0.5), 1, "summable")])
    def test_index_sets(self, kind, first, adm):
        assert kind.min_index == first and kind.admissibility == adm
        assert kind.check_index(first) == first
        with pytest.raises(DomainError):
            kind.check_index(first - 1)
        with pytest.raises(DomainError):
            kind.check_index(1.5)


class TestCoeffSeq:
    def test_norms(self):
        a = CoeffSeq(1, (1.0, -2.0, 0.5))
        assert a.indices.tolist() == [1, 2, 3]
        assert a.weighted_norm == pytest.approx(1 + 4 + 1.5)
        assert a.l1_norm == pytest.approx(3.5)
        assert list(a.items()) == [(1, 1.0), (2, -2.0), (3, 0.5)]

    @pytest.mark.parametrize("args", [(2, (1.0,)), (0, (float("inf"),)), (0, (1.0,), "bounded")])
    def test_invalid(self, args):
        with pytest.raises(AdmissibilityError):
            CoeffSeq(*args)

    def test_kind_checks(self):
        with pytest.raises(AdmissibilityError):
            CoeffSeq.for_kind(TransformKind.imj(), [1.0], start_index=0)
        with pytest.raises(AdmissibilityError):
            CoeffSeq(1, (1.0,), "weighted").check_for(TransformKind.lommel(-0.5))
        assert CoeffSeq.for_kind(TransformKind.lommel(-0.5), [1.0]).admissibility == "summable"


class TestPeriodicProfile:
    def test_derived_fields(self):
        p = PeriodicProfile((1.0, -1.0))
        assert (p.parity, p.psi_at_zero, p.lipschitz_const) == ("even", 0.0, 1.0)
        q = PeriodicProfile((), (0.0, 1.0, -0.5))
        assert (q.parity, q.psi_at_zero, q.lipschitz_const) == ("odd", 0.0, 2.0)
        assert PeriodicProfile((1.0,), (0.0, 1.0)).parity == "none"

    def test_presets(self):
        u = np.linspace(-3, 3, 7)
        assert np.allclose(PeriodicProfile.preset("1-cos")(u), 1 - np.cos(u))
        assert np.allclose(PeriodicProfile.preset("sin")(u), np.sin(u))
        with pytest.raises(ValueError):
            PeriodicProfile.preset("square")

    def test_invalid(self):
        with pytest.raises(ProfileClassError):
            PeriodicProfile((), (1.0,))
        with pytest.raises(ProfileClassError):
            PeriodicProfile((float("nan"),))

    @pytest.mark.parametrize("kind", [TransformKind.rej(), TransformKind.imj()])
    def test_class_checks(self, kind):
        with pytest.raises(ProfileClassError):
            PeriodicProfile.preset("sin").check_for(kind)
        with pytest.raises(ProfileClassError):
            PeriodicProfile.preset("cos").check_for(kind)
        PeriodicProfile.preset("1-cos").check_for(kind)


class TestKernels:
    def test_against_oracle(self, oracles):
        for r in oracles["kernels"]:
            kind = TransformKind(r["tag"], r["mu"])
            assert transforms.kernel_values(kind, r["n"], r["x"]) == pytest.approx(r["value"], abs=1e-11), r

    @pytest.mark.parametrize("x", [0.01, 0.7, 2.0, 9.0, 33.0, 150.0])
    def test_phi0_closed_form(self, x):
        want = (math.cos(x) - math.cos(x * COSH_PI)) / x
        assert transforms.kernel_values("ReJ", 0, x) == pytest.approx(want, abs=1e-12)
        assert transforms.kernel("ReJ", 0, x) == pytest.approx(want, abs=1e-9)

    @pytest.mark.parametrize("n", range(5))
    def test_psi_at_origin(self, n):
        want = ((-1) ** n * COSH_PI - 1) / (1 + n * n)
        assert transforms.kernel_values("ImJ", n, 1e-9) == pytest.approx(want, abs=1e-7)

    @pytest.mark.parametrize("mu", [-0.5, -1.0])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_omega_at_origin(self, mu, n):
        want = math.sin(-math.pi * mu / 2) * n * (-1) ** (n + 1) * SINH_PI / (1 + n * n)
        assert transforms.kernel_values(TransformKind.lommel(mu), n, 1e-9) == pytest.approx(want, abs=1e-7)

    def test_phi_vanishes_at_origin(self):
        assert abs(transforms.kernel_values("ReJ", 2, 1e-4)) <= 1e-4 * (COSH_PI ** 2 - 1) / 2

    def test_error_output_and_shape(self):
        x = np.linspace(0.1, 200, 12).reshape(3, 4)
        v, e = transforms.kernel_values("ImJ", 3, x, with_error=True)
        assert v.shape == e.shape == (3, 4) and np.all(e < 1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            transforms.kernel_values("ReJ", 1, 0.0)

    @given(st.sampled_from(KINDS), st.integers(1, 6), st.floats(0.05, 120))
    def test_fast_route_matches_reference(self, kind, n, x):
        fast = transforms.kernel_values(kind, n, x)
        ref = transforms.kernel(kind, n, x)
        assert fast == pytest.approx(ref, abs=1e-8)

    @given(st.integers(0, 6), st.floats(0.1, 60))
    def test_bessel_kernels_bounded(self, n, x):
        # |Phi_n|, |Psi_n| <= int_0^pi sinh u du = cosh(pi) - 1
        for tag in ("ReJ", "ImJ"):
            assert abs(transforms.kernel_values(tag, n, x)) <= COSH_PI - 1


class TestSynthesize:
    @pytest.mark.parametrize("x", [0.5, 3.0, 40.0])
    def test_delta_sequences(self, x):
        re, im, _ = specfun.jin_normalized(2, x)
        assert transforms.synthesize("ReJ", CoeffSeq(0, (0.0, 0.0, 1.0)), x) == pytest.approx(float(re))
        assert transforms.synthesize("ImJ", CoeffSeq(1, (0.0, 1.0)), x) == pytest.approx(float(im))
        kind = TransformKind.lommel(-0.5)
        got = transforms.synthesize(kind, CoeffSeq(1, (0.0, 1.0), "summable"), x)
        assert got == pytest.approx(specfun.lommel_scaled(-0.5, 2, x))

    @given(st.lists(st.floats(-2, 2), min_size=1, max_size=5), st.floats(-3, 3), st.floats(0.1, 50))
    def test_linearity(self, coeffs, c, x):
        a = CoeffSeq(0, tuple(coeffs))
        scaled = CoeffSeq(0, tuple(c * v for v in coeffs))
        assert transforms.synthesize("ReJ", scaled, x) == pytest.approx(c * transforms.synthesize("ReJ", a, x),
                                                                       abs=1e-12)

    def test_admissibility_enforced(self):
        with pytest.raises(AdmissibilityError):
            transforms.synthesize("ImJ", CoeffSeq(0, (1.0,)), 1.0)


class TestProfiles:
    def test_profile_coefficients_one_minus_cos(self):
        psi = PeriodicProfile.preset("1-cos")
        got = [transforms.profile_coefficients("ReJ", psi, n) for n in range(5)]
        assert got == pytest.approx([math.pi, -math.pi / 2, 0, 0, 0], abs=1e-12)
        assert transforms.profile_coefficients("ImJ", psi, 1) == pytest.approx(math.pi / 2)

    def test_lommel_sin_coefficient(self):
        kind = TransformKind.lommel(-0.5)
        want = 2 ** -0.5 * math.pi ** 3 / math.sinh(math.pi)
        assert transforms.profile_coefficients(kind, PeriodicProfile.preset("sin"), 1) == pytest.approx(want)

    def test_even_profile_has_no_lommel_content(self):
        kind = TransformKind.lommel(-0.5)
        psi = PeriodicProfile.preset("1-cos")
        assert all(abs(transforms.profile_coefficients(kind, psi, n)) < 1e-13 for n in range(1, 5))
        assert abs(transforms.build_profile_function(kind, psi, 2.0)) < 1e-11

    @given(st.sampled_from(KINDS), st.floats(0.1, 30))
    def test_profile_function_matches_definition(self, kind, x):
        psi = PeriodicProfile((1.0, -0.5, -0.5)) if kind.tag != "Lommel" else PeriodicProfile((), (0.0, 1.0, 0.3))
        assert transforms.profile_function(kind, psi)(x) == pytest.approx(
            transforms.build_profile_function(kind, psi, x), abs=1e-9)

    def test_analyze_profile_matches_closed_form(self):
        psi = PeriodicProfile.preset("1-cos")
        for kind in (TransformKind.rej(), TransformKind.imj()):
            rep = transforms.analyze_profile(kind, psi, 1)
            assert rep.converged
            assert rep.value == pytest.approx(transforms.profile_coefficients(kind, psi, 1), abs=1e-6)

    def test_profile_class_enforced(self):
        with pytest.raises(ProfileClassError):
            transforms.build_profile_function("ReJ", PeriodicProfile.preset("cos"), 1.0)


class TestInversion:
    def test_zeroth_weight(self):
        a = CoeffSeq(0, (0.7,))
        rep = transforms.invert_to_sequence("ReJ", lambda x: transforms.synthesize("ReJ", a, x), 0)
        assert rep.value == pytest.approx(0.7, abs=1e-6)

    def test_lommel_delta(self):
        kind = TransformKind.lommel(-1.0)
        a = CoeffSeq.for_kind(kind, [0.0, 1.0])
        f = lambda x: transforms.synthesize(kind, a, x)
        assert transforms.invert_to_sequence(kind, f, 2).value == pytest.approx(1.0, abs=1e-6)
        assert transforms.invert_to_sequence(kind, f, 1).value == pytest.approx(0.0, abs=1e-6)

    def test_index_set_enforced(self):
        with pytest.raises(DomainError):
            transforms.invert_to_sequence("ImJ", np.sin, 0)

    @pytest.mark.parametrize("tag", ["ReJ", "ImJ"])
    def test_correction_term_is_zeroth_kernel(self, tag):
        x = np.array([0.3, 1.0, 4.0, 25.0])
        term = transforms.correction_term(tag, x, "theorem")
        assert np.allclose(term, transforms.kernel_values(tag, 0, x) / math.pi, atol=1e-13)
        assert np.allclose(transforms.correction_term(tag, x, "proof"), -term)
        with pytest.raises(ValueError):
            transforms.correction_term(tag, x, "other")

    @given(st.lists(st.floats(-1, 1), min_size=1, max_size=4), st.sampled_from(["ReJ", "ImJ"]),
           st.floats(0.2, 20))
    def test_consistent_reconstruction(self, tail, tag, x):
        psi = even_profile(tail)
        a = transforms.profile_coeff_seq(tag, psi, len(tail) + 1)
        got = transforms.invert_to_function(tag, a, x)
        assert got == pytest.approx(transforms.build_profile_function(tag, psi, x), abs=1e-9)

    @given(st.lists(st.floats(-1, 1), min_size=2, max_size=4), st.floats(0.2, 20))
    def test_lommel_reconstruction(self, sines, x):
        kind = TransformKind.lommel(-0.5)
        psi = PeriodicProfile((), (0.0,) + tuple(sines))
        a = transforms.profile_coeff_seq(kind, psi, len(sines) + 1)
        assert transforms.invert_to_function(kind, a, x) == pytest.approx(
            transforms.build_profile_function(kind, psi, x), abs=1e-9)

    def test_printed_corrections_need_the_zeroth_moment(self):
        psi = PeriodicProfile.preset("1-cos")
        x = np.array([0.5, 2.0])
        a = transforms.profile_coeff_seq("ReJ", psi, 3)
        f = np.array([transforms.build_profile_function("ReJ", psi, v) for v in x])
        for mode in ("theorem", "proof"):
            assert np.max(np.abs(transforms.invert_to_function("ReJ", a, x, correction=mode) - f)) > 1e-3

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            transforms.invert_to_function("ReJ", CoeffSeq(0, (1.0,)), 1.0, correction="none")
