"""Compile polynomial systems into pseudo-Boolean objectives and QUBO matrices.

The pipeline expands the residual sum of squares of a system in the bit
basis of an encoding, producing a multilinear pseudo-Boolean polynomial
(PUBO) whose energy at any bitstring equals the residual sum of squares at
the decoded point, constant included.  Cubic and quartic terms are then
reduced to quadratic form by substituting products of bit pairs with
auxiliary bits held consistent by penalty terms

    C * (psi_i psi_j - 2 psi_i aux - 2 psi_j aux + 3 aux)

which vanish exactly when aux = psi_i * psi_j and cost at least C otherwise.

Degree-1 systems take a direct fast path (:func:`compile_linear_qubo`) that
never builds the intermediate PUBO and needs no auxiliaries.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .encoding import BitEncoding, decode
from .polysys import PolynomialSystem

__all__ = [
    "PseudoBooleanPolynomial",
    "QuboMatrix",
    "sparsify",
    "compile_pubo",
    "choose_penalty",
    "quadratize",
    "compile_linear_qubo",
    "pubo_energy",
    "qubo_energy",
    "decode_qubo_bits",
    "export_qubo",
]


@dataclass(frozen=True, eq=False)
class PseudoBooleanPolynomial:
    """Multilinear polynomial over binary variables plus a constant offset.

    ``terms`` maps sorted, duplicate-free index tuples to coefficients;
    the empty product lives in ``offset``.
    """

    terms: dict[tuple[int, ...], float]
    offset: float
    num_bits: int

    @property
    def max_term_size(self) -> int:
        return max((len(t) for t in self.terms), default=0)

    def __repr__(self) -> str:
        return (
            f"PseudoBooleanPolynomial(bits={self.num_bits}, "
            f"terms={len(self.terms)}, max_size={self.max_term_size}, "
            f"offset={self.offset:g})"
        )


@dataclass(frozen=True, eq=False)
class QuboMatrix:
    """Upper-triangular quadratic form over logical + auxiliary bits.

    Attributes:
        matrix: (T, T) upper-triangular coefficient matrix, T = logical + aux.
        offset: constant carried so energies read as residual sums of squares.
        num_logical: leading bit count that decodes to variables.
        aux_pairs: ordered logical pairs, one per auxiliary bit (aux k
            represents the product of pair ``aux_pairs[k]``).
        penalty: consistency weight C used for the auxiliary constraints.
    """

    matrix: np.ndarray = field()
    offset: float = field()
    num_logical: int = field()
    aux_pairs: tuple[tuple[int, int], ...] = field(default=())
    penalty: float = field(default=0.0)

    def __init__(self, matrix, offset, num_logical, aux_pairs=(), penalty=0.0):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"matrix must be square, got shape {matrix.shape}")
        if np.any(np.tril(matrix, -1) != 0):
            raise ValueError("matrix must be upper triangular")
        aux_pairs = tuple(tuple(p) for p in aux_pairs)
        if matrix.shape[0] != num_logical + len(aux_pairs):
            raise ValueError(
                f"matrix is {matrix.shape[0]}x{matrix.shape[0]} but "
                f"{num_logical} logical + {len(aux_pairs)} aux bits were declared"
            )
        if len(set(aux_pairs)) != len(aux_pairs):
            raise ValueError("aux_pairs contains duplicates")
        for i, j in aux_pairs:
            if not (0 <= i < j < num_logical):
                raise ValueError(f"aux pair ({i}, {j}) is not an ordered logical pair")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", float(offset))
        object.__setattr__(self, "num_logical", int(num_logical))
        object.__setattr__(self, "aux_pairs", aux_pairs)
        object.__setattr__(self, "penalty", float(penalty))

    @property
    def num_bits(self) -> int:
        """Total bit count including auxiliaries."""
        return self.matrix.shape[0]

    @property
    def num_aux(self) -> int:
        return len(self.aux_pairs)

    @property
    def aux_map(self) -> dict[int, tuple[int, int]]:
        """Map from auxiliary bit index to the logical pair it represents."""
        return {self.num_logical + k: pair for k, pair in enumerate(self.aux_pairs)}

    def __repr__(self) -> str:
        return (
            f"QuboMatrix(logical={self.num_logical}, aux={self.num_aux}, "
            f"penalty={self.penalty:g}, offset={self.offset:g})"
        )


def _canon(indices) -> tuple[int, ...]:
    """Canonical index set: idempotence applied, sorted ascending."""
    return tuple(sorted(set(indices)))


def sparsify(raw_terms, num_bits: int) -> PseudoBooleanPolynomial:
    """Canonicalize raw multilinear terms into sparse upper-triangular form.

    ``raw_terms`` is a mapping (or iterable of pairs) from index tuples to
    coefficients.  Index tuples may be unsorted and may contain repeats;
    repeats collapse under the idempotence psi^2 = psi, permutations of the
    same set accumulate into one coefficient, and empty products accumulate
    into the offset.  The represented energy function is unchanged.
    """
    items = raw_terms.items() if hasattr(raw_terms, "items") else raw_terms
    terms: dict[tuple[int, ...], float] = defaultdict(float)
    offset = 0.0
    for indices, coeff in items:
        key = _canon(indices)
        if key and (key[0] < 0 or key[-1] >= num_bits):
            raise ValueError(f"term {tuple(indices)} references a bit outside 0..{num_bits - 1}")
        if key:
            terms[key] += coeff
        else:
            offset += coeff
    terms = {k: v for k, v in terms.items() if v != 0.0}
    return PseudoBooleanPolynomial(terms=terms, offset=offset, num_bits=num_bits)


def _poly_mul(p: dict, q: dict) -> dict:
    """Product of two multilinear polynomials with idempotence applied."""
    out: dict[tuple[int, ...], float] = defaultdict(float)
    for t1, c1 in p.items():
        for t2, c2 in q.items():
            out[_canon(t1 + t2)] += c1 * c2
    return out


def compile_pubo(system: PolynomialSystem, enc: BitEncoding) -> PseudoBooleanPolynomial:
    """Expand the residual sum of squares of ``system`` in the bit basis.

    For every logical bitstring psi the result satisfies

        pubo_energy(result, psi) == chi_squared(system, decode(enc, psi))

    up to floating-point rounding, with the constant offset carried so the
    identity holds with no free constant.
    """
    if enc.num_vars != system.num_variables:
        raise ValueError(
            f"encoding covers {enc.num_vars} variables, system coeffs[1] "
            f"expects {system.num_variables}"
        )
    n_eq = system.num_equations
    bits_of = [
        {(): enc.offset[j], **{
            (j * enc.bits + r,): enc.scale[j] * 2.0**r for r in range(enc.bits)
        }}
        for j in range(enc.num_vars)
    ]

    # cache bit-basis expansions of variable monomials, keyed by sorted index
    # tuple (multiplication commutes, so order within the tuple is irrelevant)
    monomials: dict[tuple[int, ...], dict] = {}

    def monomial(var_indices: tuple[int, ...]) -> dict:
        key = tuple(sorted(var_indices))
        poly = monomials.get(key)
        if poly is None:
            poly = bits_of[key[0]]
            for j in key[1:]:
                poly = _poly_mul(poly, bits_of[j])
            monomials[key] = poly
        return poly

    residual_polys = [defaultdict(float, {(): system.coeffs[0][i]}) for i in range(n_eq)]
    for order in range(1, system.degree + 1):
        tensor = system.coeffs[order]
        for var_indices in product(range(system.num_variables), repeat=order):
            coeffs_col = tensor[(slice(None),) + var_indices]
            if not np.any(coeffs_col):
                continue
            poly = monomial(var_indices)
            for i in range(n_eq):
                ci = coeffs_col[i]
                if ci == 0.0:
                    continue
                for t, c in poly.items():
                    residual_polys[i][t] += ci * c

    total: dict[tuple[int, ...], float] = defaultdict(float)
    for rp in residual_polys:
        for t, c in _poly_mul(rp, rp).items():
            total[t] += c
    return sparsify(total, num_bits=enc.num_bits)


def choose_penalty(pubo: PseudoBooleanPolynomial) -> float:
    """Auxiliary-consistency weight that safely dominates any single violation.

    Returns ``1 + 2 * sum(|coefficients|)`` over the polynomial's terms.
    Breaking one constraint costs at least the returned C, while the largest
    energy decrease obtainable anywhere in the objective is below C.
    """
    return 1.0 + 2.0 * float(sum(abs(c) for c in pubo.terms.values()))


def quadratize(
    pubo: PseudoBooleanPolynomial,
    penalty: float | None = None,
    aux: str = "lazy",
) -> QuboMatrix:
    """Reduce a PUBO of term size <= 4 to a QUBO by pair substitution.

    Every cubic term {i, j, k} (sorted) becomes aux(i, j) * psi_k and every
    quartic term {i, j, k, l} becomes aux(i, j) * aux(k, l); pairing the two
    lowest indices is the tie-break.  Each allocated auxiliary pair adds the
    penalty row keeping it equal to the product of its logical bits.

    Args:
        pubo: polynomial to reduce; terms larger than 4 are rejected since
            they would need a further substitution round, which this
            implementation does not perform.
        penalty: constraint weight C; defaults to :func:`choose_penalty`.
        aux: ``"lazy"`` allocates auxiliaries only for pairs that occur in
            cubic/quartic terms; ``"all"`` allocates every logical pair in
            lexicographic order (half L(L-1) auxiliaries).
    """
    if pubo.max_term_size > 4:
        worst = max(pubo.terms, key=len)
        raise ValueError(
            f"term {worst} has {len(worst)} bits; a second substitution round "
            "would be required to quadratize it, which is not implemented"
        )
    if aux not in ("lazy", "all"):
        raise ValueError(f"aux must be 'lazy' or 'all', got {aux!r}")
    c_pen = choose_penalty(pubo) if penalty is None else float(penalty)
    if c_pen <= 0:
        raise ValueError(f"penalty must be positive, got {c_pen!r}")

    n_log = pubo.num_bits
    if aux == "all":
        pairs = list(combinations(range(n_log), 2))
    else:
        needed: set[tuple[int, int]] = set()
        for t in pubo.terms:
            if len(t) == 3:
                needed.add((t[0], t[1]))
            elif len(t) == 4:
                needed.add((t[0], t[1]))
                needed.add((t[2], t[3]))
        pairs = sorted(needed)
    aux_index = {pair: n_log + k for k, pair in enumerate(pairs)}

    size = n_log + len(pairs)
    q = np.zeros((size, size))

    def add(i: int, j: int, value: float) -> None:
        q[min(i, j), max(i, j)] += value

    for t, coeff in pubo.terms.items():
        if len(t) == 1:
            add(t[0], t[0], coeff)
        elif len(t) == 2:
            add(t[0], t[1], coeff)
        elif len(t) == 3:
            add(aux_index[(t[0], t[1])], t[2], coeff)
        else:
            add(aux_index[(t[0], t[1])], aux_index[(t[2], t[3])], coeff)

    for (i, j), a in aux_index.items():
        add(i, j, c_pen)
        add(i, a, -2.0 * c_pen)
        add(j, a, -2.0 * c_pen)
        add(a, a, 3.0 * c_pen)

    return QuboMatrix(q, pubo.offset, n_log, aux_pairs=pairs, penalty=c_pen)


def compile_linear_qubo(system: PolynomialSystem, enc: BitEncoding) -> QuboMatrix:
    """Direct QUBO for a degree-1 system, no auxiliaries.

    The energy at any bitstring equals the residual sum of squares
    ``||coeffs[1] @ x + coeffs[0]||^2`` at the decoded point, offset carried.
    """
    if system.degree != 1:
        raise ValueError(
            f"linear fast path requires a degree-1 system, got degree {system.degree}"
        )
    if enc.num_vars != system.num_variables:
        raise ValueError(
            f"encoding covers {enc.num_vars} variables, system coeffs[1] "
            f"expects {system.num_variables}"
        )
    p1 = system.coeffs[1]
    # residual as an affine map of the bit vector: F(psi) = const + gain @ psi
    const = system.coeffs[0] + p1 @ enc.offset
    gain = np.zeros((system.num_equations, enc.num_bits))
    for j in range(enc.num_vars):
        gain[:, j * enc.bits : (j + 1) * enc.bits] = np.outer(
            p1[:, j] * enc.scale[j], enc.weights
        )
    normal = gain.T @ gain
    linear = 2.0 * (const @ gain) + np.diag(normal)
    q = np.triu(2.0 * normal, 1)
    np.fill_diagonal(q, linear)
    return QuboMatrix(q, float(const @ const), enc.num_bits)


def pubo_energy(pubo: PseudoBooleanPolynomial, psi) -> float | np.ndarray:
    """Evaluate a PUBO at a bitstring of shape (L,) or a batch (..., L)."""
    psi = np.asarray(psi, dtype=float)
    if psi.ndim == 0 or psi.shape[-1] != pubo.num_bits:
        raise ValueError(
            f"bitstring has length {psi.shape[-1] if psi.ndim else 0}, "
            f"polynomial expects {pubo.num_bits}"
        )
    energy = np.full(psi.shape[:-1], pubo.offset)
    for t, c in pubo.terms.items():
        energy = energy + c * np.prod(psi[..., list(t)], axis=-1)
    return float(energy) if energy.ndim == 0 else energy


def qubo_energy(qm: QuboMatrix, bits) -> float | np.ndarray:
    """Evaluate a QUBO at a full bit vector (logical + aux), batched like psi."""
    bits = np.asarray(bits, dtype=float)
    if bits.ndim == 0 or bits.shape[-1] != qm.num_bits:
        raise ValueError(
            f"bit vector has length {bits.shape[-1] if bits.ndim else 0}, "
            f"QUBO expects {qm.num_bits} (={qm.num_logical} logical + {qm.num_aux} aux)"
        )
    energy = np.sum((bits @ qm.matrix) * bits, axis=-1) + qm.offset
    return float(energy) if energy.ndim == 0 else energy


def decode_qubo_bits(qm: QuboMatrix, enc: BitEncoding, bits) -> np.ndarray:
    """Decode the logical prefix of a full QUBO bit vector."""
    bits = np.asarray(bits)
    return decode(enc, bits[..., : qm.num_logical])


def export_qubo(qm: QuboMatrix, path) -> None:
    """Write a QUBO as a diff-friendly text file.

    One header line carrying the offset, logical bit count, and auxiliary
    count, followed by one ``i j value`` line per nonzero upper-triangular
    entry in row-major order.
    """
    with open(path, "w") as fh:
        fh.write(
            f"offset={qm.offset!r} logical={qm.num_logical} aux={qm.num_aux}\n"
        )
        rows, cols = np.nonzero(qm.matrix)
        for i, j in zip(rows.tolist(), cols.tolist()):
            fh.write(f"{i} {j} {float(qm.matrix[i, j])!r}\n")
