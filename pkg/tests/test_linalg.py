import random

import pytest
from hypothesis import given, strategies as st

from cnotsynth.circuit import Circuit, Gate, GateKind, cnot
from cnotsynth.linalg import (
    AugmentedTransform,
    ParityMatrix,
    apply_gate_to_transform,
    f2_in_span,
    f2_rank,
    f2_solve,
    parity_mask,
    transform_of_circuit,
)
from tests.conftest import APPENDIX_A_BITS


def test_x_sets_flip_bit():
    a = AugmentedTransform.identity(3)
    out = apply_gate_to_transform(a, Gate(GateKind.X, 2))
    assert out.get(2, 4) == 1
    assert a.get(2, 4) == 0  # input untouched


def test_cnot_row_addition():
    a = AugmentedTransform.identity(2)
    out = apply_gate_to_transform(a, cnot(1, 2))
    assert [out.get(2, j) for j in (1, 2, 3)] == [1, 1, 0]


def test_rejects_other_gates():
    a = AugmentedTransform.identity(2)
    with pytest.raises(ValueError):
        apply_gate_to_transform(a, Gate(GateKind.T, 1))


def test_appendix_first_column_replay():
    # replaying the first column's row-operation list reproduces the printed matrix
    a = AugmentedTransform.from_bits(APPENDIX_A_BITS)
    for src, dst in [(4, 5), (3, 4), (1, 2), (2, 3), (1, 2)]:
        a.row_xor(dst, src)
    expected = AugmentedTransform.from_bits(
        [
            [1, 1, 0, 1, 1, 0, 0],
            [0, 0, 1, 1, 0, 1, 0],
            [0, 1, 0, 0, 0, 1, 0],
            [0, 1, 1, 1, 1, 0, 0],
            [0, 0, 1, 0, 0, 0, 0],
            [0, 1, 0, 1, 0, 1, 0],
        ]
    )
    assert a == expected


def test_row_add_involution():
    rng = random.Random(7)
    bits = [[rng.randint(0, 1) for _ in range(6)] for _ in range(5)]
    a = AugmentedTransform.from_bits(bits)
    b = a.copy()
    b.row_xor(2, 1)
    b.row_xor(2, 1)
    assert a == b


@given(st.integers(min_value=2, max_value=6), st.randoms(use_true_random=False))
def test_row_add_preserves_invertibility(n, rng):
    bits = [[rng.randint(0, 1) for _ in range(n + 1)] for _ in range(n)]
    a = AugmentedTransform.from_bits(bits)
    before = a.is_invertible()
    dst, src = rng.sample(range(1, n + 1), 2)
    a.row_xor(dst, src)
    assert a.is_invertible() == before


def test_fold_equals_composition():
    rng = random.Random(11)
    gates = []
    for _ in range(30):
        if rng.random() < 0.7:
            c, t = rng.sample(range(1, 5), 2)
            gates.append(cnot(c, t))
        else:
            gates.append(Gate(GateKind.X, rng.randint(1, 4)))
    circ = Circuit(4, tuple(gates))
    folded = transform_of_circuit(circ)
    step = AugmentedTransform.identity(4)
    for g in circ.gates:
        step = apply_gate_to_transform(step, g)
    assert folded == step


def test_dump_round_trip():
    a = AugmentedTransform.from_bits(APPENDIX_A_BITS)
    assert AugmentedTransform.from_dump(a.to_dump()) == a


def test_transpose():
    a = AugmentedTransform.from_bits([[1, 1, 0], [0, 1, 0]])
    t = a.transposed_linear()
    assert [t.get(1, j) for j in (1, 2)] == [1, 0]
    assert [t.get(2, j) for j in (1, 2)] == [1, 1]


def test_parity_matrix_merges_and_drops():
    terms = [
        (1, parity_mask([1])),
        (1, parity_mask([1])),  # merges to 2
        (4, parity_mask([2], const=True)),
        (4, parity_mask([2], const=True)),  # merges to 0, dropped
        (3, parity_mask([], const=True)),  # zero variable mask, dropped
    ]
    pm = ParityMatrix.from_terms(3, terms)
    assert len(pm.columns) == 1
    assert pm.columns[0].coeff == 2
    assert pm.columns[0].mask == parity_mask([1])


def test_parity_matrix_idempotent():
    pm = ParityMatrix.from_terms(
        4, [(1, parity_mask([1, 3])), (6, parity_mask([2], const=True)), (2, parity_mask([4]))]
    )
    again = ParityMatrix.from_terms(4, pm.terms())
    assert again == pm


def test_f2_span_matches_enumeration():
    rng = random.Random(3)
    for _ in range(200):
        rows = [rng.getrandbits(6) << 1 for _ in range(rng.randint(1, 5))]
        target = rng.getrandbits(6) << 1
        spanned = any(
            _xor_subset(rows, mask) == target for mask in range(1 << len(rows))
        )
        assert f2_in_span(rows, target) == spanned
        combo = f2_solve(rows, target)
        if combo is not None:
            assert _xor_subset(rows, combo) == target


def _xor_subset(rows, mask):
    acc = 0
    for i, r in enumerate(rows):
        if mask >> i & 1:
            acc ^= r
    return acc


def test_rank():
    assert f2_rank([0b10, 0b100, 0b110]) == 2
    assert f2_rank([]) == 0


def test_row_add_pure():
    from cnotsynth.linalg import row_add

    a = AugmentedTransform.identity(3)
    b = row_add(a, 1, 2)
    assert a.is_identity()
    assert [b.get(2, j) for j in (1, 2, 3)] == [1, 1, 0]


B0_GRID = [
    # parity-network columns p1..p7 as a 6x7 bit grid (rows x1..x6)
    [1, 0, 0, 1, 1, 1, 0],
    [0, 1, 0, 1, 1, 1, 1],
    [0, 1, 0, 0, 1, 0, 0],
    [1, 0, 1, 0, 0, 1, 1],
    [1, 1, 1, 0, 0, 0, 1],
    [0, 1, 1, 1, 0, 1, 0],
]

B4_GRID = [
    # the same columns after row 6 += row 5 and then row 5 += row 4
    [1, 0, 0, 1, 1, 1, 0],
    [0, 1, 0, 1, 1, 1, 1],
    [0, 1, 0, 0, 1, 0, 0],
    [1, 0, 1, 0, 0, 1, 1],
    [0, 1, 0, 0, 0, 1, 0],
    [1, 0, 0, 1, 0, 1, 1],
]


def test_parity_column_row_operations_fixture():
    cols = [sum(B0_GRID[r][j] << (r + 1) for r in range(6)) for j in range(7)]

    def col_row_xor(dst, src):
        for i, m in enumerate(cols):
            if m >> src & 1:
                cols[i] = m ^ (1 << dst)

    col_row_xor(6, 5)
    col_row_xor(5, 4)
    expected = [sum(B4_GRID[r][j] << (r + 1) for r in range(6)) for j in range(7)]
    assert cols == expected
