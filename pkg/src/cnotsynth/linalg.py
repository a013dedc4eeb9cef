"""Boolean matrix core shared by the synthesis modules.

Rows and parities are stored as Python ints used as bit vectors: bit ``i``
(for ``i >= 1``) is the coefficient of variable ``x_i`` and bit 0 is the
affine constant (the bit-flip variable ``b``). XOR is row addition over F2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Gate, GateKind

CONST_BIT = 1  # mask of the affine-constant bit


class SingularTransformError(ValueError):
    """The linear block of a transform is not invertible over F2."""


def parity_mask(variables: tuple[int, ...] | list[int], const: bool = False) -> int:
    """Build a parity int from 1-indexed variable numbers."""
    p = CONST_BIT if const else 0
    for v in variables:
        p ^= 1 << v
    return p


def parity_vars(p: int) -> list[int]:
    """1-indexed variable numbers appearing in a parity int."""
    out = []
    v = 1
    q = p >> 1
    while q:
        if q & 1:
            out.append(v)
        v += 1
        q >>= 1
    return out


def format_parity(p: int) -> str:
    terms = (["1"] if p & CONST_BIT else []) + [f"x{v}" for v in parity_vars(p)]
    return "⊕".join(terms) if terms else "0"


def f2_row_reduce(rows: list[int]) -> tuple[list[int], list[int]]:
    """Row-echelon basis of the linear parts (constant bit stripped).

    Returns (basis, combos): ``basis[k]`` is a reduced row and ``combos[k]`` a
    bitmask over the *input* rows (bit i = input row i used) producing it.
    """
    basis: list[int] = []
    combos: list[int] = []
    for i, row in enumerate(rows):
        cur, combo = _reduce_against(row & ~CONST_BIT, 1 << i, basis, combos)
        if cur:
            basis.append(cur)
            combos.append(combo)
    return basis, combos


def _reduce_against(cur: int, combo: int, basis: list[int], combos: list[int]) -> tuple[int, int]:
    for b, c in zip(basis, combos):
        if cur & _pivot_bit(b):
            cur ^= b
            combo ^= c
    return cur, combo


def _pivot_bit(row: int) -> int:
    # highest set bit as a mask
    return 1 << (row.bit_length() - 1)


def f2_solve(rows: list[int], target: int) -> int | None:
    """Find a bitmask S over ``rows`` with XOR of their linear parts == target's.

    Constant bits are ignored. Returns None when the target is not in the span.
    """
    basis, combos = f2_row_reduce(rows)
    cur = target & ~CONST_BIT
    combo = 0
    cur, combo = _reduce_against(cur, combo, basis, combos)
    return None if cur else combo


def f2_in_span(rows: list[int], target: int) -> bool:
    return f2_solve(rows, target) is not None


def f2_rank(rows: list[int]) -> int:
    return len(f2_row_reduce(rows)[0])


@dataclass
class AugmentedTransform:
    """The augmented transform [A'|b]: n rows of n variable bits plus a flip bit.

    Row i (1-indexed) is the parity currently held by qubit i, as a parity int.
    The value of a freshly allocated transform is the identity [I|0].
    """

    n: int
    rows: list[int]

    @staticmethod
    def identity(n: int) -> "AugmentedTransform":
        return AugmentedTransform(n, [1 << i for i in range(1, n + 1)])

    @staticmethod
    def from_bits(bits: list[list[int]]) -> "AugmentedTransform":
        """Rows given as 0/1 lists in column order x1..xn, b."""
        n = len(bits)
        rows = []
        for r in bits:
            if len(r) != n + 1:
                raise ValueError(f"expected {n + 1} columns, got {len(r)}")
            rows.append(parity_mask([i + 1 for i in range(n) if r[i]], const=bool(r[n])))
        return AugmentedTransform(n, rows)

    def copy(self) -> "AugmentedTransform":
        return AugmentedTransform(self.n, list(self.rows))

    def get(self, i: int, j: int) -> int:
        """Entry at row i, column j; column n+1 is the bit-flip column."""
        mask = CONST_BIT if j == self.n + 1 else (1 << j)
        return 1 if self.rows[i - 1] & mask else 0

    def row_xor(self, dst: int, src: int) -> None:
        """Row dst <- row dst XOR row src (1-indexed, dst != src)."""
        if dst == src:
            raise ValueError("row_xor needs distinct rows")
        self.rows[dst - 1] ^= self.rows[src - 1]

    def apply_gate(self, g: Gate) -> None:
        """Replay one gate: CNOT(c,t) adds row c into row t; X(i) toggles row i's flip bit."""
        if g.kind is GateKind.CNOT:
            self.row_xor(g.target, g.control)
        elif g.kind is GateKind.X:
            self.rows[g.target - 1] ^= CONST_BIT
        else:
            raise ValueError(f"transform replay supports only CNOT and X, got {g.kind.value}")

    def linear_rows(self) -> list[int]:
        return [r & ~CONST_BIT for r in self.rows]

    def is_invertible(self) -> bool:
        return f2_rank(self.rows) == self.n

    def transposed_linear(self) -> "AugmentedTransform":
        """Transpose of the n x n block; the flip column is dropped (it must be 0)."""
        rows = []
        for i in range(1, self.n + 1):
            rows.append(parity_mask([j for j in range(1, self.n + 1) if self.rows[j - 1] >> i & 1]))
        return AugmentedTransform(self.n, rows)

    def is_identity(self) -> bool:
        return self.rows == [1 << i for i in range(1, self.n + 1)]

    def padded(self, n: int) -> "AugmentedTransform":
        """Extend with identity rows up to n qubits."""
        if n < self.n:
            raise ValueError("cannot shrink a transform")
        return AugmentedTransform(n, list(self.rows) + [1 << i for i in range(self.n + 1, n + 1)])

    def to_dump(self) -> str:
        lines = []
        for r in self.rows:
            bits = [str(r >> j & 1) for j in range(1, self.n + 1)] + [str(r & 1)]
            lines.append(" ".join(bits))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_dump(text: str) -> "AugmentedTransform":
        bits = [[int(t) for t in line.split()] for line in text.splitlines() if line.strip()]
        return AugmentedTransform.from_bits(bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, AugmentedTransform) and (self.n, self.rows) == (other.n, other.rows)


def apply_gate_to_transform(a: AugmentedTransform, g: Gate) -> AugmentedTransform:
    """Pure version of :meth:`AugmentedTransform.apply_gate`."""
    out = a.copy()
    out.apply_gate(g)
    return out


def row_add(a: AugmentedTransform, src: int, dst: int) -> AugmentedTransform:
    """Pure elementary row operation: row dst <- row dst XOR row src."""
    out = a.copy()
    out.row_xor(dst, src)
    return out


def replay_circuit(a: AugmentedTransform, gates) -> AugmentedTransform:
    out = a.copy()
    for g in gates:
        out.apply_gate(g)
    return out


def transform_of_circuit(c: Circuit) -> AugmentedTransform:
    """Fold a {CNOT, X} circuit into its augmented transform, starting from [I|0]."""
    return replay_circuit(AugmentedTransform.identity(c.num_qubits), c.gates)


@dataclass(frozen=True)
class ParityColumn:
    """One parity-network matrix column: variable mask, bit-flip bit, Z8 coefficient."""

    mask: int  # variable bits only (bit i = x_i); constant bit excluded
    bit: bool
    coeff: int


@dataclass(frozen=True)
class ParityMatrix:
    """Deduplicated parity columns over n wires, in first-appearance order.

    Construction merges equal (mask, bit) columns mod 8 and drops columns whose
    coefficient vanishes or whose variable mask is zero (a pure global phase).
    """

    n: int
    columns: tuple[ParityColumn, ...]

    @staticmethod
    def from_terms(n: int, terms) -> "ParityMatrix":
        """``terms`` is an iterable of (coeff, parity int)."""
        merged: dict[tuple[int, bool], int] = {}
        for coeff, parity in terms:
            mask = parity & ~CONST_BIT
            if mask >> (n + 1):
                raise ValueError(f"parity {format_parity(parity)} uses variables beyond x{n}")
            key = (mask, bool(parity & CONST_BIT))
            merged[key] = (merged.get(key, 0) + coeff) % 8
        cols = tuple(
            ParityColumn(mask, bit, coeff)
            for (mask, bit), coeff in merged.items()
            if coeff and mask
        )
        return ParityMatrix(n, cols)

    def terms(self) -> list[tuple[int, int]]:
        """Back to (coeff, parity int) pairs."""
        return [(c.coeff, c.mask | (CONST_BIT if c.bit else 0)) for c in self.columns]
