import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import (
    irreducible_by_enumeration,
    random_pattern_operator,
    random_reducible_operator,
    two_member_union_example,
)
from qcl import linalg
from qcl.errors import ContractViolation, DegenerateTopEigenvalue, ProblemFormatError, ValidationError
from qcl.hamiltonians import (
    FeasibleSubspace,
    MixingFamily,
    RestrictedOperator,
    builtin_controlled_x_family,
    builtin_transverse_field_family,
    builtin_xy_mixing_family,
    check_mixer,
    check_mixing_family,
    check_phase_separator,
    connected_components,
    is_irreducible,
    matrix_to_doc,
    mixing_family_from_doc,
    objective_hamiltonian,
    one_hot_subspace,
    perron_top_eigenstate,
    restrict,
    sigma_x,
    transverse_field,
    xy_pairs,
    xy_term,
)
from qcl.problems import Cop, bitstring, load_problem, make_max_independent_set, make_maxcut, solve_brute_force

CYCLE4 = [(0, 1), (1, 2), (2, 3), (3, 0)]
seeds = st.integers(0, 2**32 - 1)


def subspace_of(n, strings):
    return FeasibleSubspace(n, tuple(sorted(int(s, 2) for s in strings)))


# -- subspace / restriction -------------------------------------------------------

def test_feasible_subspace_contract():
    with pytest.raises(ContractViolation):
        FeasibleSubspace(2, ())
    with pytest.raises(ContractViolation):
        FeasibleSubspace(2, (1, 1))
    with pytest.raises(ContractViolation):
        FeasibleSubspace(2, (2, 1))
    with pytest.raises(ContractViolation):
        FeasibleSubspace(2, (0, 4))
    s = FeasibleSubspace(2, (0, 3))
    assert s.dim_s == 2 and list(s.complement()) == [1, 2]
    assert s.positions([3]) == [1]
    with pytest.raises(ContractViolation):
        s.positions([1])
    assert np.array_equal(s.embed([1, 2]), [1, 0, 0, 2])


def test_objective_hamiltonian_examples():
    C = objective_hamiltonian(make_maxcut(4, CYCLE4))
    assert C[5, 5] == 4 and C[10, 10] == 4
    assert np.count_nonzero(C - np.diag(np.diag(C))) == 0
    assert not np.any(objective_hamiltonian(Cop(2, np.zeros(4), np.ones(4, bool))))
    assert np.array_equal(objective_hamiltonian(Cop(1, [1.0, 0.0], [True, True])), np.diag([1, 0]))


def test_restrict_examples():
    s = subspace_of(3, ["001", "010", "111"])
    assert np.array_equal(restrict(np.eye(8), s).matrix, np.eye(3))
    B = restrict(transverse_field(2), FeasibleSubspace.full(2)).matrix
    for a in range(4):
        for b in range(4):
            assert B[a, b] == (1 if bin(a ^ b).count("1") == 1 else 0)
    assert not np.any(restrict(transverse_field(2), subspace_of(2, ["00", "11"])).matrix)


def test_restrict_contract():
    with pytest.raises(ContractViolation):
        restrict(np.eye(4), FeasibleSubspace(3, (0,)))
    with pytest.raises(ContractViolation):
        restrict(np.array([[0, 1], [0, 0]]), FeasibleSubspace(1, (0, 1)))
    with pytest.raises(ContractViolation):
        RestrictedOperator(FeasibleSubspace(1, (0,)), np.eye(2))


def test_sigma_x_big_endian():
    X0 = sigma_x(2, 0)
    assert X0[0b10, 0b00] == 1 and X0[0b01, 0b00] == 0


def test_xy_term_swaps():
    M = xy_term(2, 0, 1)
    assert M[0b10, 0b01] == 1 and M[0b01, 0b10] == 1
    assert M[0b00, 0b00] == 0 and M[0b11, 0b11] == 0
    # matches (XX + YY)/2 built from Pauli matrices
    X = np.array([[0, 1], [1, 0]])
    Y = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(M, (np.kron(X, X) + np.kron(Y, Y)) / 2)


# -- phase separator -------------------------------------------------------------

def test_phase_separator_examples():
    p = make_maxcut(4, CYCLE4)
    rep = solve_brute_force(p)
    s = FeasibleSubspace.full(4)
    C = objective_hamiltonian(p)
    assert check_phase_separator(C, s, rep.optimal_indices).ok
    v = check_phase_separator(-C, s, rep.optimal_indices)
    assert v.diagonal and not v.matches_optimal and not v.ok
    v = check_phase_separator(sigma_x(1, 0), FeasibleSubspace.full(1), [0])
    assert not v.diagonal and not v.ok


def test_phase_separator_is_diagonal_on_full_space():
    # off-diagonal coupling outside S still disqualifies the operator
    s = subspace_of(2, ["00", "01"])
    H = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    H[2, 3] = H[3, 2] = 0.5
    assert not check_phase_separator(H, s, [0]).ok


@given(n=st.integers(1, 6), seed=seeds)
def test_objective_is_always_a_phase_separator(n, seed):
    rng = np.random.default_rng(seed)
    feas = rng.random(2**n) < 0.5
    feas[0] = True
    p = Cop(n, rng.integers(-2, 3, 2**n).astype(float), feas)
    rep = solve_brute_force(p)
    assert check_phase_separator(objective_hamiltonian(p), FeasibleSubspace.from_cop(p), rep.optimal_indices).ok


# -- mixer ------------------------------------------------------------------------

def test_transverse_field_is_mixer():
    for n in range(1, 5):
        v = check_mixer(transverse_field(n), FeasibleSubspace.full(n))
        assert v.ok and v.components == (tuple(range(2**n)),)


def test_two_member_example_components():
    B1, B2 = two_member_union_example()
    s = FeasibleSubspace.full(2)
    v1, v2 = check_mixer(B1, s), check_mixer(B2, s)
    assert not v1.irreducible and v1.components == ((0, 1), (2, 3))
    assert not v2.irreducible and v2.components == ((0, 2, 3), (1,))
    fam = check_mixing_family(MixingFamily((B1, B2)), s)
    assert fam.ok and fam.components == ((0, 1, 2, 3),)
    single = check_mixing_family(MixingFamily((B1,)), s)
    assert not single.ok and single.components == ((0, 1), (2, 3))


def test_negative_entry_detected():
    B = transverse_field(2).copy()
    B[0, 1] = B[1, 0] = -0.5
    v = check_mixer(B, FeasibleSubspace.full(2))
    assert not v.entrywise_nonneg and v.most_negative == -0.5 and not v.ok


def test_complex_entries_rejected():
    B = np.array([[0, 1j], [-1j, 0]])
    v = check_mixer(B, FeasibleSubspace.full(1))
    assert not v.entrywise_nonneg and v.irreducible


def test_leakage_detected():
    s = subspace_of(2, ["01", "10"])
    v = check_mixer(transverse_field(2), s)
    assert not v.feasibility_preserving and v.max_leakage == 1.0
    assert check_mixer(xy_term(2, 0, 1), s).ok


def test_mixer_verdict_dict():
    d = check_mixer(transverse_field(1), FeasibleSubspace.full(1)).as_dict()
    assert d["ok"] and d["components"] == [[0, 1]]


@given(seed=seeds, d=st.integers(1, 12), density=st.floats(0.0, 0.6), reducible=st.booleans())
def test_irreducibility_matches_enumeration(seed, d, density, reducible):
    rng = np.random.default_rng(seed)
    M = random_reducible_operator(rng, d) if reducible and d > 1 else random_pattern_operator(rng, d, density, True)
    assert is_irreducible(M) == irreducible_by_enumeration(M)


def test_connected_components_partition():
    assert connected_components(5, [(0, 3), (3, 4)]) == [(0, 3, 4), (1,), (2,)]


# -- mixing families ---------------------------------------------------------------

def test_transverse_family_sums_to_field():
    fam = builtin_transverse_field_family(3)
    assert np.array_equal(fam.total(), transverse_field(3))
    assert check_mixing_family(fam, FeasibleSubspace.full(3)).ok


def test_family_contract():
    with pytest.raises(ContractViolation):
        MixingFamily(())
    with pytest.raises(ContractViolation):
        MixingFamily((np.eye(2), np.eye(4)))
    with pytest.raises(ContractViolation):
        MixingFamily((np.eye(2), np.eye(2)), order=(0, 0))
    with pytest.raises(ContractViolation):
        MixingFamily((np.array([[0, 1], [0, 0]]),))


def test_family_order_controls_restriction_order():
    fam = MixingFamily((sigma_x(2, 0), sigma_x(2, 1)), order=(1, 0))
    mats = fam.restricted(FeasibleSubspace.full(2))
    assert np.array_equal(mats[0], sigma_x(2, 1))


@given(seed=seeds, d=st.integers(2, 32), k=st.integers(1, 4), density=st.floats(0.0, 0.3))
def test_union_graph_equals_sum_irreducibility(seed, d, k, density):
    rng = np.random.default_rng(seed)
    members = [np.abs(random_pattern_operator(rng, d, density)) for _ in range(k)]
    s = FeasibleSubspace(5, tuple(sorted(rng.choice(32, size=d, replace=False))))
    full = []
    for M in members:
        F = np.zeros((32, 32))
        idx = np.asarray(s.basis_indices)
        F[np.ix_(idx, idx)] = M
        full.append(F)
    v = check_mixing_family(MixingFamily(tuple(full)), s)
    summed = check_mixer(sum(full), s)
    assert v.jointly_irreducible == summed.irreducible
    assert v.ok == summed.ok


# -- XY and controlled-X families ------------------------------------------------

def test_xy_pairs():
    assert xy_pairs([0, 1]) == [(0, 1)]
    assert xy_pairs([0, 1, 2]) == [(0, 1), (1, 2), (2, 0)]
    assert xy_pairs([0, 1, 2], "complete") == [(0, 1), (0, 2), (1, 2)]
    with pytest.raises(ValueError):
        xy_pairs([0, 1], "star")


def test_xy_single_group_of_two():
    fam = builtin_xy_mixing_family([[0, 1]])
    s = one_hot_subspace(2, [[0, 1]])
    assert len(fam) == 1
    assert np.array_equal(restrict(fam.total(), s).matrix, [[0, 1], [1, 0]])
    assert check_mixing_family(fam, s).ok


def test_xy_group_of_three():
    fam = builtin_xy_mixing_family([[0, 1, 2]])
    s = one_hot_subspace(3, [[0, 1, 2]])
    assert [bitstring(i, 3) for i in s.basis_indices] == ["001", "010", "100"]
    v = check_mixing_family(fam, s)
    assert v.ok and v.components == ((1, 2, 4),)
    for m in fam.members:
        assert check_mixer(m, s).feasibility_preserving


def test_xy_two_groups():
    fam = builtin_xy_mixing_family([[0, 1], [2, 3]])
    s = one_hot_subspace(4, [[0, 1], [2, 3]])
    assert len(fam) == 2 and s.dim_s == 4
    assert check_mixing_family(fam, s).ok


def test_xy_family_errors():
    with pytest.raises(ValueError):
        builtin_xy_mixing_family([[0]])
    with pytest.raises(ValueError):
        builtin_xy_mixing_family([[0, 1], [1, 2]])


def test_xy_preserves_group_weight():
    n = 4
    for m in builtin_xy_mixing_family([[0, 1, 2, 3]]).members:
        for z in range(2**n):
            for w in np.flatnonzero(m[:, z]):
                assert bin(int(w)).count("1") == bin(z).count("1")


def test_controlled_x_family_on_independent_sets():
    p = make_max_independent_set(3, [(0, 1), (1, 2)])
    s = FeasibleSubspace.from_cop(p)
    v = check_mixing_family(builtin_controlled_x_family(3, [(0, 1), (1, 2)]), s)
    assert v.ok
    # the transverse field leaks out of the independent sets
    assert not check_mixer(transverse_field(3), s).feasibility_preserving


# -- Perron state ------------------------------------------------------------------

def test_perron_transverse_field_is_uniform():
    for n in range(1, 5):
        s = FeasibleSubspace.full(n)
        st_ = perron_top_eigenstate(restrict(transverse_field(n), s))
        assert abs(st_.eigenvalue - n) < 1e-12
        assert np.allclose(st_.vector, np.full(2**n, 2 ** (-n / 2)), atol=1e-12)


def test_perron_pauli_x():
    st_ = perron_top_eigenstate(restrict(sigma_x(1, 0), FeasibleSubspace.full(1)))
    assert np.allclose(st_.vector, [2**-0.5, 2**-0.5], atol=1e-14)
    assert abs(st_.eigenvalue - 1) < 1e-14 and abs(st_.gap - 2) < 1e-14


def test_perron_path_graph():
    R = RestrictedOperator(FeasibleSubspace(2, (0, 1, 2)), np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    st_ = perron_top_eigenstate(R)
    assert abs(st_.eigenvalue - np.sqrt(2)) < 1e-12
    assert np.all(st_.vector.real > 0)
    assert np.allclose(st_.vector, [0.5, 2**-0.5, 0.5], atol=1e-12)


def test_perron_errors():
    s = FeasibleSubspace.full(2)
    R = restrict(sigma_x(2, 0), s)
    with pytest.raises(DegenerateTopEigenvalue):
        perron_top_eigenstate(R)
    with pytest.raises(ValidationError):
        perron_top_eigenstate(R, check_mixer(sigma_x(2, 0), s))


@given(seed=seeds, d=st.integers(2, 12))
def test_perron_vector_strictly_positive(seed, d):
    rng = np.random.default_rng(seed)
    M = np.abs(random_pattern_operator(rng, d, 0.4))
    # chain in a spanning path so the pattern is connected
    perm = rng.permutation(d)
    for a, b in zip(perm, perm[1:]):
        M[a, b] = M[b, a] = max(M[a, b], 0.3)
    s = FeasibleSubspace(4, tuple(range(d)))
    F = np.zeros((16, 16))
    F[:d, :d] = M
    v = check_mixer(F, s)
    assert v.ok
    st_ = perron_top_eigenstate(RestrictedOperator(s, M), v)
    assert np.all(st_.vector.real > 1e-12)
    assert np.max(np.abs(st_.vector.imag)) < 1e-12


@given(seed=seeds, d=st.integers(2, 12))
def test_diagonal_shift_keeps_irreducibility(seed, d):
    rng = np.random.default_rng(seed)
    M = np.abs(random_pattern_operator(rng, d, 0.5))
    perm = rng.permutation(d)
    for a, b in zip(perm, perm[1:]):
        M[a, b] = M[b, a] = 1.0
    D = np.diag(rng.normal(scale=10, size=d))
    assert is_irreducible(M) and is_irreducible(D + M)
    assert irreducible_by_enumeration(D + M)


# -- documents ---------------------------------------------------------------------

def test_family_from_doc_variants():
    doc = {"n": 2, "objective": {"type": "mis_weight"}}
    assert np.array_equal(mixing_family_from_doc(doc).total(), transverse_field(2))
    doc = {"n": 4, "objective": {"type": "mis_weight"}, "feasible": {"type": "one_hot", "groups": [[0, 1], [2, 3]]},
           "mixer": {"type": "xy_onehot"}}
    assert len(mixing_family_from_doc(doc)) == 2
    doc = {"n": 3, "objective": {"type": "mis_weight"},
           "feasible": {"type": "independent_set", "edges": [[0, 1], [1, 2]]}, "mixer": {"type": "controlled_x"}}
    fam = mixing_family_from_doc(doc)
    assert check_mixing_family(fam, FeasibleSubspace.from_cop(load_problem(doc))).ok


def test_explicit_matrices_round_trip():
    B1, B2 = two_member_union_example()
    doc = {"n": 2, "objective": {"type": "mis_weight"},
           "mixer": {"type": "explicit", "matrices": [matrix_to_doc(B1), matrix_to_doc(B2)], "order": [1, 0]}}
    fam = mixing_family_from_doc(doc)
    assert np.array_equal(fam.members[0], B1) and fam.order == (1, 0)
    flat = [[float(z.real), float(z.imag)] for z in B1.astype(complex).ravel()]
    doc["mixer"] = {"type": "explicit", "matrices": [flat]}
    assert np.array_equal(mixing_family_from_doc(doc).members[0], B1)


@pytest.mark.parametrize("mixer", [
    {"type": "mystery"},
    {"type": "xy_onehot"},
    {"type": "controlled_x"},
    {"type": "explicit", "matrices": []},
    {"type": "explicit", "matrices": [[[0, 0]] * 3]},
])
def test_family_from_doc_errors(mixer):
    with pytest.raises(ProblemFormatError):
        mixing_family_from_doc({"n": 2, "objective": {"type": "mis_weight"}, "mixer": mixer})


def test_operator_norm_of_restriction_bounded():
    s = subspace_of(3, ["000", "011", "101"])
    assert linalg.operator_norm(restrict(transverse_field(3), s).matrix) <= 3
