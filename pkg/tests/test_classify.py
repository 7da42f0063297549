import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kannappan.classify import (
    FAMILIES,
    CharacterPhiAdd,
    CharacterPlusPhi,
    ConstraintViolation,
    FamilyDescriptor,
    PreconditionViolation,
    TwoCharacter,
    TwoCharacterAdd,
    UnknownTag,
    _build,
    Unrepresentable,
    classify_t36,
    classify_t44,
    construct,
    construct_t36,
    construct_t44,
    decompose_sine_addition,
    decompose_sine_subtraction,
    lemma_suite_t36,
    lemma_suite_t44,
    validate_descriptor,
    verify_prop31,
)
from kannappan.cli.sweep import generate_instances
from kannappan.equations import EquationId, NotASolution, normalize_instance, residual
from kannappan.functions import (
    DiscreteMeasure,
    double_moment,
    enumerate_exponentials,
    fit_measure,
    integrate,
    solve_sine_addition_special,
)

from conftest import SQRT3, close, idn

F4 = np.array([0, 1j * SQRT3, -1j * SQRT3])
G4 = np.array([1, -0.5, -0.5])


@pytest.fixture(scope="module")
def z3(Z3, neg3):
    chis = enumerate_exponentials(Z3)
    return Z3, neg3, chis[1]


@pytest.fixture(scope="module")
def t36_3(z3):
    S, sigma, chi = z3
    mu = fit_measure(S, [(chi, -2), (chi.pullback(sigma), 2)], [0, 1, 2])
    return mu, FamilyDescriptor("T36_3", {"gamma": 1, "b": 1, "c": 0}, chi=chi)


@pytest.fixture(scope="module")
def product_phi(T4xT4, swap16):
    chi = enumerate_exponentials(T4xT4)[0]
    (phi,) = solve_sine_addition_special(T4xT4, chi, parity=(swap16, -1)).basis
    return chi, phi


class TestDescriptor:
    def test_unknown_tag(self):
        with pytest.raises(UnknownTag):
            FamilyDescriptor("T99_1")

    def test_payload_shape(self, z3):
        _, _, chi = z3
        with pytest.raises(ValueError):
            FamilyDescriptor("T36_4", {"beta": 1, "b": 1}, chi=chi)
        with pytest.raises(ValueError):
            FamilyDescriptor("T36_4", {"beta": 1, "b": 1, "c": 0})
        with pytest.raises(ValueError):
            FamilyDescriptor("T44_5", chi=chi)

    def test_to_dict(self, z3):
        d = FamilyDescriptor("T36_4", {"beta": 1, "b": 2j, "c": 0}, chi=z3[2]).to_dict()
        assert d == {"tag": "T36_4", "chi": "[1, e(1/3), e(2/3)]",
                     "params": {"beta": [1.0, 0.0], "b": [0.0, 2.0], "c": [0.0, 0.0]}}


class TestConstruct:
    def test_t36_4_cyclic(self, z3, delta0):
        S, sigma, chi = z3
        desc = FamilyDescriptor("T36_4", {"beta": 1, "b": 1, "c": 0}, chi=chi)
        f, g = construct_t36(S, sigma, delta0, desc)
        assert close(f, F4, 1e-14) and close(g, G4, 1e-14)
        assert residual(S, sigma, delta0, EquationId.KSSub, f, g).max_residual <= 1e-14

    def test_t36_3_fitted(self, z3, t36_3):
        S, sigma, chi = z3
        mu, desc = t36_3
        f, g = construct_t36(S, sigma, mu, desc)
        assert close(f, (chi.values + chi.pullback(sigma).values) / 2)
        assert close(g, chi.values - chi.pullback(sigma).values)
        assert residual(S, sigma, mu, EquationId.KSSub, f, g).max_residual <= 1e-14

    def test_t36_8_product(self, T4xT4, swap16, product_phi, delta0):
        chi, phi = product_phi
        f, g = construct_t36(T4xT4, swap16, delta0, FamilyDescriptor("T36_8", {"c": 2}, chi=chi, func=phi))
        assert close(f, phi) and close(g, chi.values + 2 * phi)
        assert residual(T4xT4, swap16, delta0, EquationId.KSSub, f, g).max_residual == 0

    def test_t44_examples(self, Z2, T4, delta0):
        one, alt = enumerate_exponentials(Z2)
        f, g = construct_t44(Z2, idn(2), delta0, FamilyDescriptor("T44_3", {"delta": 1}, chi=one))
        assert close(f, [0.5, 0.5]) and close(g, [0.5, 0.5])
        f, g = construct_t44(Z2, idn(2), delta0, FamilyDescriptor("T44_4", {"alpha": 1}, chi=one, chi2=alt))
        assert close(f, [0, 1]) and close(g, [1, 0])
        chi = enumerate_exponentials(T4)[0]
        f, g = construct_t44(T4, idn(4), delta0, FamilyDescriptor("T44_5", chi=chi, func=[0, 1, 0, 0]))
        assert close(f, [0, 1, 0, 0]) and close(g, [1, 0, 0, 0])
        assert residual(T4, idn(4), delta0, EquationId.KSAdd, f, g).max_residual == 0

    def test_wrong_theorem(self, z3, delta0):
        S, sigma, chi = z3
        with pytest.raises(UnknownTag):
            construct_t44(S, sigma, delta0, FamilyDescriptor("T36_4", {"beta": 1, "b": 1, "c": 0}, chi=chi))

    def test_constraint_violation(self, z3, t36_3):
        S, sigma, chi = z3
        mu, _ = t36_3
        with pytest.raises(ConstraintViolation) as info:
            construct_t36(S, sigma, mu, FamilyDescriptor("T36_3", {"gamma": 1, "b": 1, "c": 1}, chi=chi))
        assert "c not in {1, -1}" in info.value.report.failed()

    def test_gauge_swap(self, z3, t36_3):
        # (chi, b, c) and (chi o sigma, -b, -c) give the same pair
        S, sigma, chi = z3
        mu, _ = t36_3
        d1 = FamilyDescriptor("T36_5", {"alpha": 2, "delta": 1j, "b": 0.5, "c": 3}, chi=chi)
        d2 = FamilyDescriptor("T36_5", {"alpha": 2, "delta": 1j, "b": -0.5, "c": -3}, chi=chi.pullback(sigma))
        f1, g1 = _build(S, sigma, mu, d1)
        f2, g2 = _build(S, sigma, mu, d2)
        assert close(f1, f2) and close(g1, g2)


class TestValidate:
    def test_t36_4_passes(self, z3, delta0):
        S, sigma, chi = z3
        rep = validate_descriptor(S, sigma, delta0, FamilyDescriptor("T36_4", {"beta": 1, "b": 1, "c": 0}, chi=chi))
        assert rep.ok and len(rep.checks) >= 5

    def test_t36_6_square_moment(self, T4xT4, swap16, product_phi, delta0):
        chi, phi = product_phi
        rep = validate_descriptor(T4xT4, swap16, delta0, FamilyDescriptor("T36_6", {"gamma": 1}, chi=chi, func=phi))
        assert rep.failed() == ["int phi dmu = (int chi dmu)^2"]

    def test_sigma_relation_exact(self, z3, delta0):
        S, sigma, chi = z3
        chi0 = enumerate_exponentials(S)[0]
        rep = validate_descriptor(S, sigma, delta0, FamilyDescriptor("T36_4", {"beta": 1, "b": 1, "c": 0}, chi=chi0))
        assert "chi o sigma != chi" in rep.failed()

    def test_annihilation(self, Z3, delta0):
        rep = validate_descriptor(Z3, idn(3), delta0, FamilyDescriptor("T36_2", {"k": 1}, func=[1, 0, 0]))
        assert rep.failed() == ["int f(x y t) dmu(t) = 0 for all x, y"]


class TestDecompose:
    def test_two_character(self, z3):
        S, sigma, chi = z3
        dec = decompose_sine_subtraction(S, sigma, F4, G4)
        assert isinstance(dec, TwoCharacter) and dec.chi == chi
        assert abs(dec.b - 1) < 1e-12 and abs(dec.c) < 1e-12

    def test_character_plus_phi(self, T4xT4, swap16, product_phi):
        chi, phi = product_phi
        dec = decompose_sine_subtraction(T4xT4, swap16, phi, chi.values)
        assert isinstance(dec, CharacterPlusPhi) and dec.chi == chi and abs(dec.c) < 1e-12

    def test_zero_input(self, z3):
        S, sigma, _ = z3
        dec = decompose_sine_subtraction(S, sigma, np.zeros(3), np.zeros(3))
        assert isinstance(dec, Unrepresentable) and "dependent" in dec.note

    def test_not_a_solution(self, z3):
        S, sigma, _ = z3
        with pytest.raises(NotASolution):
            decompose_sine_subtraction(S, sigma, [1, 2, 3], [1, 0, 0])

    def test_addition_forms(self, Z2, T4):
        one, alt = enumerate_exponentials(Z2)
        dec = decompose_sine_addition(Z2, idn(2), [0, 1], [1, 0])
        assert isinstance(dec, TwoCharacterAdd) and {dec.chi1, dec.chi2} == {one, alt}
        chi = enumerate_exponentials(T4)[0]
        dec = decompose_sine_addition(T4, idn(4), [0, 1, 0, 0], chi.values)
        assert isinstance(dec, CharacterPhiAdd) and dec.chi == chi


class TestClassify:
    def test_t36_4(self, z3, delta0):
        S, sigma, _ = z3
        desc, trace = classify_t36(S, sigma, delta0, F4, G4)
        assert desc.tag == "T36_4"
        f, g = construct(S, sigma, delta0, desc)
        assert close(f, F4, 1e-12) and close(g, G4, 1e-12)
        assert "M_g != 0, M_f = 0" in trace.branches

    def test_zero_f(self, Z3, neg3, delta0):
        desc, _ = classify_t36(Z3, neg3, delta0, np.zeros(3), [3, 7, 1])
        assert desc.tag == "T36_1" and close(desc.func, [3, 7, 1])

    def test_t36_8_recovers_c(self, T4xT4, swap16, product_phi, delta0):
        chi, phi = product_phi
        desc, _ = classify_t36(T4xT4, swap16, delta0, phi, chi.values + 2 * phi)
        assert desc.tag == "T36_8" and abs(desc["c"] - 2) < 1e-12

    def test_t44_examples(self, Z2, T4, delta0):
        one, alt = enumerate_exponentials(Z2)
        desc, trace = classify_t44(Z2, idn(2), delta0, [0, 1], [1, 0])
        assert desc.tag == "T44_4" and {desc.chi, desc.chi2} == {one, alt}
        assert "int f = 0" in trace.branches
        desc, _ = classify_t44(Z2, idn(2), delta0, [0.5, 0.5], [0.5, 0.5])
        assert desc.tag == "T44_3" and desc.chi == one and abs(desc["delta"] - 1) < 1e-12
        desc, _ = classify_t44(T4, idn(4), delta0, [0, 1, 0, 0], [1, 0, 0, 0])
        assert desc.tag == "T44_5"

    def test_not_a_solution(self, z3, delta0):
        S, sigma, _ = z3
        with pytest.raises(NotASolution):
            classify_t36(S, sigma, delta0, [1, 2, 3], [0, 1, 1])
        with pytest.raises(NotASolution):
            classify_t44(S, sigma, delta0, [1, 2, 3], [0, 1, 1])


class TestProp31:
    def test_examples(self, Z2):
        mu = DiscreteMeasure.point_mass(0, 2)
        one, alt = enumerate_exponentials(Z2)
        rep = verify_prop31(Z2, idn(2), mu, [2, 2])
        assert rep.verdict and rep.chi == one and abs(rep.alpha - 0.5) < 1e-15
        rep = verify_prop31(Z2, idn(2), mu, [2, -2])
        assert rep.verdict and rep.chi == alt
        rep = verify_prop31(Z2, idn(2), mu, [0, 0])
        assert rep.verdict and rep.part_a and rep.chi is None

    def test_not_a_solution(self, Z2):
        with pytest.raises(NotASolution):
            verify_prop31(Z2, idn(2), DiscreteMeasure.point_mass(0), [1, 2])


class TestLemmas:
    def test_t36_instances(self, z3, t36_3, T4xT4, swap16, product_phi, delta0):
        S, sigma, _ = z3
        mu, desc = t36_3
        assert lemma_suite_t36(S, sigma, mu, *construct(S, sigma, mu, desc)).verdict
        assert lemma_suite_t36(S, sigma, delta0, F4, G4).verdict
        chi, phi = product_phi
        rep = lemma_suite_t36(T4xT4, swap16, delta0, phi, chi.values + 2 * phi)
        assert rep.verdict and len(rep.checks) == 4

    def test_t44_instances(self, Z2, T4, delta0):
        rep = lemma_suite_t44(Z2, idn(2), delta0, [0, 1], [1, 0])
        assert rep.verdict
        names = [c.name for c in rep.checks]
        assert "iint f(ts) = iint f(sigma(t)s)" in names
        assert lemma_suite_t44(T4, idn(4), delta0, [0, 1, 0, 0], [1, 0, 0, 0]).verdict

    def test_dependent_rejected(self, Z2, delta0):
        with pytest.raises(PreconditionViolation):
            lemma_suite_t44(Z2, idn(2), delta0, [0.5, 0.5], [0.5, 0.5])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(list(FAMILIES)))
def test_forward_soundness_and_round_trip(seed, tag):
    (inst,) = generate_instances(seed, 1, [tag])
    S, sigma, desc = inst.S, inst.sigma, inst.descriptor
    assert validate_descriptor(S, sigma, inst.mu, desc).ok
    mu, f, g = normalize_instance(inst.mu, *construct(S, sigma, inst.mu, desc))
    assert residual(S, sigma, mu, desc.equation, f, g).max_residual <= 1e-9
    classify_ = classify_t36 if tag.startswith("T36") else classify_t44
    got, trace = classify_(S, sigma, mu, f, g)
    F, G = construct(S, sigma, mu, got)
    assert close(F, f, 1e-9) and close(G, g, 1e-9)
    # trace constants reproduce their defining quotients
    m = trace.moments
    c = trace.constants
    eps = 1e-9
    if "gamma" in c:
        assert abs(c["gamma"] * m["M_f"] - m["int g"]) <= eps
    if "beta" in c and "M_g" in m and not tag.startswith("T44"):
        assert abs(c["beta"] * m["M_g"] - m["int g"]) <= eps
    if "delta" in c and "M_g" in m:
        assert abs(c["delta"] * m["M_g"] - m["int g"]) <= eps
    if "xi" in c:
        assert abs(c["xi"] * m["int f"] - integrate(mu, trace.psi)) <= eps


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["T36_3", "T36_4", "T36_5", "T36_6", "T36_7", "T36_8"]))
def test_independent_subtraction_solutions_have_zero_mean(seed, tag):
    (inst,) = generate_instances(seed, 1, [tag])
    mu, f, g = normalize_instance(inst.mu, *construct(inst.S, inst.sigma, inst.mu, inst.descriptor))
    assert abs(integrate(mu, f)) <= 1e-9
    M_g = double_moment(inst.S, mu, g, inst.sigma)
    M_f = double_moment(inst.S, mu, f, inst.sigma)
    assert abs(M_g) > 1e-9 or abs(M_f) > 1e-9
