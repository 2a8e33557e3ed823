"""The d+1 mutually unbiased bases of n qubits.

The d^2 - 1 nontrivial Pauli strings split into d+1 disjoint classes of d-1
mutually commuting strings:

- class ``Z``: every string with x = 0;
- class ``a`` for each field element a of GF(2^n): the strings (x = u, z = M_a u)
  for u != 0, where bit b of M_a u is Tr(a * u * t^b).

The trace form is symmetric, so members of one class commute, and it is
non-degenerate, so different classes share no string.  Each basis is the
joint eigenbasis of its class; basis state i carries sign (-1)^{bit n-1-q of i}
under the class generator of qubit q, which pins the ordering of states.

Basis order in a family: the canonical (Z) basis, the Hadamard (X) basis
(a = 0), then a = 1 .. d-1.  For one qubit this is Z, X, Y.

GF(2^n) elements are integers whose bit b is the coefficient of t^b, reduced
modulo a fixed irreducible polynomial per n.
"""

import functools
import logging
import operator
from dataclasses import dataclass
from typing import List, Optional, Tuple, Type

import galois
import numpy as np

from .errors import InvalidInputError, SelfCheckError
from .pauli import PauliString, commutes
from .states import StateVector, phase_normalized

logger = logging.getLogger(__name__)

MAX_MUB_QUBITS = 10

# Pairwise overlaps cost O(d^5); above this size the build-time check relies on
# the class structure and eigen-residuals, which imply unbiasedness.
FULL_OVERLAP_CHECK_QUBITS = 6

MUB_TOLERANCE = 1e-9

# Irreducible polynomials over GF(2); bit k is the coefficient of t^k.
IRREDUCIBLE_POLYNOMIALS = {
    1: 0b11,             # t + 1
    2: 0b111,            # t^2 + t + 1
    3: 0b1011,           # t^3 + t + 1
    4: 0b10011,          # t^4 + t + 1
    5: 0b100101,         # t^5 + t^2 + 1
    6: 0b1000011,        # t^6 + t + 1
    7: 0b10000011,       # t^7 + t + 1
    8: 0b100011011,      # t^8 + t^4 + t^3 + t + 1
    9: 0b1000010001,     # t^9 + t^4 + 1
    10: 0b10000001001,   # t^10 + t^3 + 1
}


@functools.lru_cache(maxsize=None)
def finite_field(n: int) -> Type[galois.FieldArray]:
    """GF(2^n) reduced modulo ``IRREDUCIBLE_POLYNOMIALS[n]``."""
    if n == 1:
        return galois.GF(2)
    return galois.GF(2 ** n, irreducible_poly=galois.Poly.Int(IRREDUCIBLE_POLYNOMIALS[n]))


def _traces(elements: galois.FieldArray, n: int) -> np.ndarray:
    # GF(2) is its own prime subfield
    values = elements if n == 1 else elements.field_trace()
    return np.asarray(values, dtype=np.int64)


def gf_multiply(a: int, b: int, n: int) -> int:
    """Product of two GF(2^n) elements."""
    field = finite_field(n)
    return int(field(a) * field(b))


def gf_trace(a: int, n: int) -> int:
    """Absolute trace a + a^2 + a^4 + ... + a^(2^(n-1)), an element of GF(2)."""
    return int(_traces(finite_field(n)([a]), n)[0])


def _class_z_columns(a: int, n: int) -> List[int]:
    """z-mask of the class-``a`` string with x = t^c, for each field bit c."""
    field = finite_field(n)
    powers = field(1 << np.arange(n))
    bits = _traces(field(a) * (powers[:, None] * powers[None, :]), n)
    weights = 1 << np.arange(n)
    return [int(row @ weights) for row in bits]


def _finite_field_class(a: int, n: int) -> Tuple[List[PauliString], List[PauliString]]:
    dim = 1 << n
    columns = _class_z_columns(a, n)
    z_of = [0] * dim
    for u in range(1, dim):
        low = (u & -u).bit_length() - 1
        z_of[u] = z_of[u & (u - 1)] ^ columns[low]
    members = [PauliString(n, u, z_of[u]) for u in range(1, dim)]
    generators = [PauliString(n, 1 << (n - 1 - q), z_of[1 << (n - 1 - q)]) for q in range(n)]
    return members, generators


def _z_class(n: int) -> Tuple[List[PauliString], List[PauliString]]:
    dim = 1 << n
    members = [PauliString(n, 0, z) for z in range(1, dim)]
    generators = [PauliString(n, 0, 1 << (n - 1 - q)) for q in range(n)]
    return members, generators


def _sign_patterns(n: int) -> np.ndarray:
    """signs[q, i] = (-1)^{bit n-1-q of i}: eigenvalue of generator q on state i."""
    idx = np.arange(1 << n)
    return np.array([1 - 2 * ((idx >> (n - 1 - q)) & 1) for q in range(n)], dtype=float)


def _joint_eigenbasis(generators: List[PauliString]) -> np.ndarray:
    n = generators[0].n_qubits
    dim = 1 << n
    weighted = sum(float(1 << (n - 1 - q)) * g.to_matrix() for q, g in enumerate(generators))
    values, vectors = np.linalg.eigh(weighted)
    # eigh is ascending; state i has eigenvalue d-1-2i
    values = values[::-1]
    vectors = vectors[:, ::-1]
    expected = dim - 1 - 2 * np.arange(dim)
    if np.max(np.abs(values - expected)) > 1e-8:
        raise SelfCheckError(f"Unexpected joint spectrum for class generators {[g.label for g in generators]}")
    columns = [phase_normalized(vectors[:, i]) for i in range(dim)]
    return np.column_stack(columns)


@dataclass(frozen=True, eq=False)
class MubFamily:
    """d+1 mutually unbiased bases with their generating Pauli classes.

    Attributes:
        n_qubits:   Number of qubits.
        matrices:   One read-only d x d grid per basis; column i is state i.
        classes:    The d-1 commuting strings whose joint eigenbasis each basis is.
        generators: n independent members of each class (one per qubit).
        labels:     ``"Z"``, ``"X"``, then ``"a=<k>"`` for the field classes.
    """

    n_qubits: int
    matrices: Tuple[np.ndarray, ...]
    classes: Tuple[Tuple[PauliString, ...], ...]
    generators: Tuple[Tuple[PauliString, ...], ...]
    labels: Tuple[str, ...]

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def size(self) -> int:
        return len(self.matrices)

    @functools.cached_property
    def bases(self) -> Tuple[Tuple[StateVector, ...], ...]:
        return tuple(
            tuple(StateVector(m[:, i]) for i in range(self.dim)) for m in self.matrices
        )

    def basis(self, j: int) -> Tuple[StateVector, ...]:
        return self.bases[j]

    def all_states(self) -> np.ndarray:
        """All d(d+1) states as rows, basis-major."""
        return np.concatenate([m.T for m in self.matrices], axis=0)


@functools.lru_cache(maxsize=None)
def build_mub_family(n: int) -> MubFamily:
    """Construct and self-verify the MUB family on ``n`` qubits (cached per n)."""
    try:
        n = operator.index(n)
    except TypeError:
        raise InvalidInputError(f"MUB construction needs an integer qubit count, got {n!r}") from None
    if not 1 <= n <= MAX_MUB_QUBITS:
        raise InvalidInputError(f"MUB construction needs 1 <= n <= {MAX_MUB_QUBITS}, got {n}")
    dim = 1 << n

    partition = [_z_class(n)] + [_finite_field_class(a, n) for a in range(dim)]
    labels = ("Z", "X") + tuple(f"a={a}" for a in range(1, dim))

    matrices = []
    for index, (_, generators) in enumerate(partition):
        grid = np.eye(dim, dtype=complex) if index == 0 else _joint_eigenbasis(generators)
        grid.setflags(write=False)
        matrices.append(grid)

    family = MubFamily(
        n_qubits=n,
        matrices=tuple(matrices),
        classes=tuple(tuple(members) for members, _ in partition),
        generators=tuple(tuple(gens) for _, gens in partition),
        labels=labels,
    )
    problems = mub_violations(family, overlaps=n <= FULL_OVERLAP_CHECK_QUBITS)
    problems += _ordering_violations(family)
    if problems:
        for problem in problems:
            logger.error("MUB self-check (n=%d): %s", n, problem)
        raise SelfCheckError(f"MUB family for n={n} failed verification: {problems[0]}")
    logger.info("Built MUB family: n=%d, %d bases of %d states", n, family.size, dim)
    return family


def mub_violations(family: MubFamily, overlaps: bool = True) -> List[str]:
    """List every MUB invariant the family violates (empty when valid)."""
    problems: List[str] = []
    dim = family.dim
    tol = MUB_TOLERANCE

    if family.size != dim + 1 or len(family.classes) != dim + 1:
        problems.append(f"expected {dim + 1} bases and classes, got {family.size}/{len(family.classes)}")
        return problems

    identity = np.eye(dim)
    for j, grid in enumerate(family.matrices):
        if grid.shape != (dim, dim):
            problems.append(f"basis {family.labels[j]} has shape {grid.shape}")
            return problems
        if np.max(np.abs(grid.conj().T @ grid - identity)) > tol:
            problems.append(f"basis {family.labels[j]} is not orthonormal")

    if overlaps:
        for a in range(family.size):
            for b in range(a + 1, family.size):
                cross = np.abs(family.matrices[a].conj().T @ family.matrices[b]) ** 2
                if np.max(np.abs(cross - 1.0 / dim)) > tol:
                    problems.append(
                        f"bases {family.labels[a]} and {family.labels[b]} are not unbiased"
                    )

    seen = set()
    for j, members in enumerate(family.classes):
        label = family.labels[j]
        keys = {(w.x_mask, w.z_mask) for w in members}
        if len(members) != dim - 1 or len(keys) != dim - 1:
            problems.append(f"class {label} does not hold {dim - 1} distinct strings")
        if (0, 0) in keys:
            problems.append(f"class {label} contains the identity")
        overlap = seen & keys
        if overlap:
            problems.append(f"class {label} shares {len(overlap)} string(s) with earlier classes")
        seen |= keys

        gens = family.generators[j]
        closed = keys | {(0, 0)}
        for g in gens:
            if (g.x_mask, g.z_mask) not in keys:
                problems.append(f"class {label} generator {g.label} is not a member")
            if any((x ^ g.x_mask, z ^ g.z_mask) not in closed for x, z in closed):
                problems.append(f"class {label} is not closed under products with {g.label}")
                break
        if any(not commutes(g, h) for g in gens for h in gens):
            problems.append(f"class {label} generators do not commute")

        # any column order and any sign pattern, as long as the patterns differ
        grid = family.matrices[j]
        patterns = []
        for g in gens:
            image = g.apply(grid)
            signs = np.where(np.einsum("ij,ij->j", grid.conj(), image).real >= 0.0, 1, -1)
            if np.max(np.abs(image - grid * signs[None, :])) > tol:
                problems.append(f"basis {label} is not a joint eigenbasis of its class ({g.label})")
                break
            patterns.append(signs)
        else:
            if gens and len({tuple(column) for column in np.array(patterns).T}) != dim:
                problems.append(f"basis {label} repeats a joint eigenvalue pattern")

    if len(seen) != dim * dim - 1:
        problems.append(f"classes cover {len(seen)} strings, expected {dim * dim - 1}")
    return problems


def _ordering_violations(family: MubFamily) -> List[str]:
    """Build-time check that state i of every basis has sign pattern i under the generators."""
    signs = _sign_patterns(family.n_qubits)
    problems = []
    for j, gens in enumerate(family.generators):
        grid = family.matrices[j]
        for q, g in enumerate(gens):
            if np.max(np.abs(g.apply(grid) - grid * signs[q][None, :])) > MUB_TOLERANCE:
                problems.append(f"basis {family.labels[j]} is not ordered by the eigenvalues of {g.label}")
                break
    return problems


def verify_mub(family: MubFamily, overlaps: bool = True) -> bool:
    """True iff the family satisfies every MUB invariant at tolerance 1e-9."""
    return not mub_violations(family, overlaps=overlaps)


def classical_bases(
    family: MubFamily, pair: Optional[Tuple[int, int]] = None,
) -> Tuple[Tuple[StateVector, ...], Tuple[StateVector, ...]]:
    """The two bases used by the classical-fidelity protocol.

    Defaults to the canonical (Z) and Hadamard (X) bases; ``pair`` selects any
    other two distinct family indices.
    """
    first, second = pair if pair is not None else (0, 1)
    for j in (first, second):
        if not 0 <= j < family.size:
            raise InvalidInputError(f"Basis index {j} out of range for a family of {family.size}")
    if first == second:
        raise InvalidInputError("The classical-fidelity bases must be distinct")
    return family.basis(first), family.basis(second)
