import numpy as np
import pytest
from numpy.testing import assert_allclose

from ipstruct import (
    Code,
    NumericalError,
    ValidationError,
    apply_channel,
    build_fixing_recovery,
    channel_from_kraus,
    embed_classical,
    helstrom_probability,
    is_correctable_via_transpose,
    is_fixed,
    is_noiseless,
    is_preserved,
    sampled_preservation_check,
    trace_norm,
    zoo,
)
from ipstruct.codes import _mixtures, code_support


def test_trace_norm_known_values():
    assert abs(trace_norm(np.diag([1.0, -2.0, 3.0])) - 6.0) < 1e-12
    # two orthogonal pure states at equal weight: distance 1 each way
    assert abs(trace_norm(0.5 * np.diag([1.0, -1.0])) - 1.0) < 1e-12


def test_helstrom_probability():
    rho = np.diag([1.0, 0.0]).astype(complex)
    sigma = np.diag([0.0, 1.0]).astype(complex)
    assert abs(helstrom_probability(rho, sigma, 0.5) - 1.0) < 1e-12
    # identical states: guessing the prior is optimal
    assert abs(helstrom_probability(rho, rho, 0.7) - 0.7) < 1e-12
    with pytest.raises(ValidationError):
        helstrom_probability(rho, sigma, 1.3)


def test_code_validation():
    with pytest.raises(ValidationError):
        Code.from_states([])
    with pytest.raises(ValidationError):
        Code.from_states([np.diag([0.6, 0.6])])  # trace != 1
    with pytest.raises(ValidationError):
        Code.from_states([np.array([[0.5, 1.0], [0.0, 0.5]])])  # not hermitian
    with pytest.raises(ValidationError):
        Code.from_states([np.diag([1.5, -0.5])])  # negative eigenvalue


def test_code_support():
    code = zoo.code_fixture("cyclic_four_02")
    assert_allclose(code_support(code), np.diag([1.0, 0, 1.0, 0]), atol=1e-12)


def test_mixture_grid_contents():
    code = zoo.code_fixture("qutrit_half_pair")  # 3 states
    labels = [lab for lab, _ in _mixtures(code, include_mixtures=True)]
    singles = [lab for lab in labels if len(lab) == 1]
    pairs = [lab for lab in labels if len(lab) == 2]
    triples = [lab for lab in labels if len(lab) == 3]
    assert len(singles) == 3
    # per pair: (1/4, 3/4), (1/2, 1/2), (3/4, 1/4); per triple: (1/4, 1/4, 1/2)
    # in its three arrangements
    assert len(pairs) == 3 * 3 and len(triples) == 3
    assert ((0, 0.5), (1, 0.5)) in pairs
    assert ((0, 0.25), (1, 0.75)) in pairs
    assert ((0, 0.25), (1, 0.25), (2, 0.5)) in triples
    assert len(set(labels)) == len(labels)
    for lab in labels:
        assert abs(sum(w for _, w in lab) - 1.0) < 1e-12
    # pairwise-only mode keeps just the listed states
    assert len(_mixtures(code, include_mixtures=False)) == 3


def test_sampled_check_catches_collapse():
    # collapse everything to |0><0|: every pair becomes indistinguishable
    k0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    k1 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    collapse = channel_from_kraus([k0, k1])
    rep = sampled_preservation_check(zoo.code_fixture("cbit"), collapse)
    assert not rep.verdict
    assert rep.distance_before > rep.distance_after


def test_sampled_check_passes_identity():
    ident = channel_from_kraus([np.eye(2)])
    rep = sampled_preservation_check(zoo.code_fixture("qubit_full"), ident)
    assert rep.verdict
    assert rep.worst_pair is None


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        sampled_preservation_check(zoo.code_fixture("cbit"),
                                   zoo.fixture("ucp_d3"))


# ---------------------------------------------------------------------------
# regression: weighted / mixture checks are strictly stronger
# ---------------------------------------------------------------------------

def test_segment_code_caught_only_by_mixtures():
    """Two classical states each pairwise-survive the squash map, but a
    midpoint mixture against an endpoint loses distinguishability."""
    ch = embed_classical(zoo.fixture("squash_three"))
    code = zoo.code_fixture("squash_segment")
    weak = sampled_preservation_check(code, ch, include_mixtures=False)
    assert weak.verdict  # the deliberately weakened pairwise check passes
    full = sampled_preservation_check(code, ch)
    assert not full.verdict
    assert not is_preserved(code, ch)
    la, lb, _p = full.worst_pair
    assert max(len(la), len(lb)) >= 2  # the witness involves a mixture


def test_weighted_pair_beats_unweighted():
    """States that tie at equal priors but separate under a skewed prior."""
    ch = zoo.fixture("qutrit_half_fail")
    code = zoo.code_fixture("qutrit_half_pair")
    unweighted = sampled_preservation_check(
        code, ch, p_values=[0.5], include_mixtures=False
    )
    assert unweighted.verdict
    weighted = sampled_preservation_check(code, ch, include_mixtures=False)
    assert not weighted.verdict
    assert not is_preserved(code, ch)


# ---------------------------------------------------------------------------
# hierarchy checks
# ---------------------------------------------------------------------------

def test_fixed_codes():
    assert is_fixed(zoo.code_fixture("cbit"), zoo.fixture("dephasing_qubit"))
    assert not is_fixed(zoo.code_fixture("plus_minus"), zoo.fixture("dephasing_qubit"))
    # preserved yet not fixed: the B factor relaxes to I/2
    ch = zoo.fixture("depolarize_B")
    code = zoo.code_fixture("product_a_ground")
    assert not is_fixed(code, ch)
    assert is_preserved(code, ch)


def test_noiseless_codes():
    ch = zoo.fixture("depolarize_B")
    assert is_noiseless(zoo.code_fixture("unitary_a_half"), ch).verdict
    rep = is_noiseless(zoo.fixture("ns_vs_code"), ch)
    assert not rep.verdict


def test_preserved_but_not_noiseless():
    ch = embed_classical(zoo.fixture("cyclic_four"))
    code = zoo.code_fixture("cyclic_four_02")
    assert is_preserved(code, ch).verdict
    rep = is_noiseless(code, ch)
    assert not rep.verdict
    assert rep.failing_map in ("time-average", "two-step", "half-identity-mix")

    mtd = zoo.fixture("measure_then_depolarize")
    ground = zoo.code_fixture("product_a_ground")
    assert is_preserved(ground, mtd).verdict
    assert not is_noiseless(ground, mtd).verdict


def test_correctable_equals_preserved():
    cases = [
        (zoo.code_fixture("cbit"), zoo.fixture("dephasing_qubit")),
        (zoo.code_fixture("plus_minus"), zoo.fixture("dephasing_qubit")),
        (zoo.code_fixture("cyclic_four_02"), embed_classical(zoo.fixture("cyclic_four"))),
        (zoo.code_fixture("ucp_sub"), zoo.fixture("ucp_d3")),
        (zoo.code_fixture("qutrit_half_pair"), zoo.fixture("qutrit_half_fail")),
    ]
    for code, ch in cases:
        assert is_preserved(code, ch).verdict == \
            is_correctable_via_transpose(code, ch).verdict


def test_hierarchy_implications():
    """fixed => noiseless => preserved, on a spread of (code, channel) pairs."""
    cases = [
        (zoo.code_fixture("cbit"), zoo.fixture("dephasing_qubit")),
        (zoo.code_fixture("plus_minus"), zoo.fixture("dephasing_qubit")),
        (zoo.code_fixture("qubit_full"), channel_from_kraus([np.eye(2)])),
        (zoo.code_fixture("unitary_a_half"), zoo.fixture("depolarize_B")),
        (zoo.code_fixture("product_a_ground"), zoo.fixture("measure_then_depolarize")),
        (zoo.code_fixture("cyclic_four_02"), embed_classical(zoo.fixture("cyclic_four"))),
        (zoo.code_fixture("ucp_sub"), zoo.fixture("ucp_d3")),
    ]
    for code, ch in cases:
        fixed = is_fixed(code, ch)
        noiseless = bool(is_noiseless(code, ch))
        preserved = bool(is_preserved(code, ch))
        if fixed:
            assert noiseless
        if noiseless:
            assert preserved


# ---------------------------------------------------------------------------
# recovery construction
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("code_name,fixture_name,embed", [
    ("cyclic_four_02", "cyclic_four", True),
    ("ucp_sub", "ucp_d3", False),
    ("cbit", "dephasing_qubit", False),
    ("product_a_ground", "measure_then_depolarize", False),
])
def test_build_fixing_recovery(code_name, fixture_name, embed):
    ch = zoo.fixture(fixture_name)
    if embed:
        ch = embed_classical(ch)
    code = zoo.code_fixture(code_name)
    rec = build_fixing_recovery(code, ch)
    for s in code.states:
        restored = apply_channel(rec, apply_channel(ch, s))
        assert trace_norm(restored - s) < 1e-7


def test_build_fixing_recovery_rejects_unpreserved():
    with pytest.raises(ValidationError):
        build_fixing_recovery(zoo.code_fixture("plus_minus"),
                              zoo.fixture("dephasing_qubit"))
