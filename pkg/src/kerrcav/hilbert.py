"""Truncated Fock (x) collective-atom Hilbert spaces and their operators.

Two atomic representations share one interface:

* ``product``   -- every atom gets its own tensor factor (dim levels**N),
* ``symmetric`` -- only the permutation-symmetric sector is kept, enumerated
  by occupation numbers per level (dim C(N + levels - 1, levels - 1)).

Every Hamiltonian in this package is permutation symmetric, so dynamics
started in a symmetric state never leaves that sector and both
representations give identical observables.

Basis ordering is frozen as part of the output contract: photon indices vary
slowest (mode a slower than mode b), the atomic configuration fastest.  For
the product representation atomic configurations are tuples (l_1, ..., l_N)
in lexicographic order with the last atom fastest; for the symmetric
representation occupations are ordered by decreasing m_0, then decreasing
m_1.  Basis labels follow ``n=2;atoms=+-`` / ``n=2;occ=(1,1,0)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

DIMENSION_GUARD = 10**6

# level symbols accepted by collective() / basis_state()
_PM = ("+", "-")


def _as_level(level) -> str:
    s = str(level)
    if s not in {"0", "1", "2", "+", "-"}:
        raise ValidationError(f"unknown atomic level {level!r}")
    return s


@dataclass(frozen=True)
class Space:
    """A validated Fock (x) atomic space with a frozen basis enumeration."""

    n_max: int
    n_modes: int
    n_atoms: int
    levels: int
    representation: str
    atomic_basis: tuple = field(repr=False)

    @property
    def photon_dim(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    @property
    def atomic_dim(self) -> int:
        return len(self.atomic_basis)

    @property
    def dim(self) -> int:
        return self.photon_dim * self.atomic_dim

    def index(self, photons, atomic_index: int) -> int:
        ns = _photon_tuple(self, photons)
        ph = 0
        for n in ns:
            ph = ph * (self.n_max + 1) + n
        return ph * self.atomic_dim + atomic_index

    def photon_numbers(self, basis_index: int) -> tuple:
        ph = basis_index // self.atomic_dim
        out = []
        for _ in range(self.n_modes):
            out.append(ph % (self.n_max + 1))
            ph //= self.n_max + 1
        return tuple(reversed(out))

    def basis_label(self, basis_index: int) -> str:
        ns = self.photon_numbers(basis_index)
        n_txt = str(ns[0]) if self.n_modes == 1 else "(" + ",".join(map(str, ns)) + ")"
        conf = self.atomic_basis[basis_index % self.atomic_dim]
        if self.representation == "product":
            return f"n={n_txt};atoms=" + "".join(str(l) for l in conf)
        return f"n={n_txt};occ=(" + ",".join(map(str, conf)) + ")"

    def basis_labels(self) -> list:
        return [self.basis_label(i) for i in range(self.dim)]


def _photon_tuple(space: Space, photons) -> tuple:
    if np.isscalar(photons):
        ns = (int(photons),)
    else:
        ns = tuple(int(n) for n in photons)
    if len(ns) != space.n_modes:
        raise ValidationError(
            f"expected {space.n_modes} photon number(s), got {len(ns)}"
        )
    for n in ns:
        if not 0 <= n <= space.n_max:
            raise ValidationError(f"photon number {n} outside 0..{space.n_max}")
    return ns


def _product_basis(n_atoms: int, levels: int) -> tuple:
    return tuple(itertools.product(range(levels), repeat=n_atoms))


def _symmetric_basis(n_atoms: int, levels: int) -> tuple:
    occs = []
    if levels == 2:
        for m0 in range(n_atoms, -1, -1):
            occs.append((m0, n_atoms - m0))
    else:
        for m0 in range(n_atoms, -1, -1):
            for m1 in range(n_atoms - m0, -1, -1):
                occs.append((m0, m1, n_atoms - m0 - m1))
    return tuple(occs)


def build_space(
    n_max: int,
    n_atoms: int,
    levels: int = 2,
    n_modes: int = 1,
    representation: str = "auto",
) -> Space:
    """Validate and construct a Space with its basis enumeration fixed.

    ``representation="auto"`` picks product for N <= 3 and symmetric above,
    where the collective enumeration pays off.
    """
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    if n_modes not in (1, 2):
        raise ValidationError(f"n_modes must be 1 or 2, got {n_modes}")
    if n_atoms < 1:
        raise ValidationError(f"n_atoms must be >= 1, got {n_atoms}")
    if levels not in (2, 3):
        raise ValidationError(f"levels_per_atom must be 2 or 3, got {levels}")
    if representation == "auto":
        representation = "product" if n_atoms <= 3 else "symmetric"
    if representation not in ("product", "symmetric"):
        raise ValidationError(f"unknown representation {representation!r}")

    if representation == "product":
        atomic = _product_basis(n_atoms, levels)
    else:
        atomic = _symmetric_basis(n_atoms, levels)
    dim = (n_max + 1) ** n_modes * len(atomic)
    if dim > DIMENSION_GUARD:
        raise ValidationError(
            f"space dimension {dim} exceeds the guard {DIMENSION_GUARD}; "
            "use the symmetric representation or a smaller truncation"
        )
    return Space(n_max, n_modes, n_atoms, levels, representation, atomic)


@dataclass(frozen=True)
class Operator:
    """A dense operator tagged with its space and a human-readable label."""

    matrix: np.ndarray
    space: Space
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValidationError(
                f"operator {self.label!r}: matrix shape {m.shape} does not match "
                f"space dimension {self.space.dim}"
            )
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space, self.label + "^dag")

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return Operator(self.matrix @ other.matrix, self.space,
                            f"{self.label}@{other.label}")
        return self.matrix @ other

    def __add__(self, other):
        m = other.matrix if isinstance(other, Operator) else other
        return Operator(self.matrix + m, self.space, self.label)

    def __sub__(self, other):
        m = other.matrix if isinstance(other, Operator) else other
        return Operator(self.matrix - m, self.space, self.label)

    def __mul__(self, scalar):
        return Operator(self.matrix * scalar, self.space, self.label)

    __rmul__ = __mul__

    def expectation(self, state: np.ndarray) -> complex:
        v = np.asarray(state, dtype=complex)
        return complex(v.conj() @ (self.matrix @ v))

    def commutator(self, other: "Operator") -> "Operator":
        return Operator(
            self.matrix @ other.matrix - other.matrix @ self.matrix,
            self.space,
            f"[{self.label},{other.label}]",
        )


def identity(space: Space) -> Operator:
    return Operator(np.eye(space.dim), space, "I")


def _photon_only(space: Space, mat_1mode: np.ndarray, mode: int) -> np.ndarray:
    """Lift a single-mode photon matrix to the full space."""
    ops = []
    for m in range(space.n_modes):
        ops.append(mat_1mode if m == mode else np.eye(space.n_max + 1))
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return np.kron(out, np.eye(space.atomic_dim))


def annihilation(space: Space, mode: int = 0) -> Operator:
    """Truncated lowering operator for the given photon mode."""
    if not 0 <= mode < space.n_modes:
        raise ValidationError(f"mode index {mode} invalid for {space.n_modes} mode(s)")
    a1 = np.diag(np.sqrt(np.arange(1, space.n_max + 1)), 1).astype(complex)
    label = "a" if space.n_modes == 1 else ("a", "b")[mode]
    return Operator(_photon_only(space, a1, mode), space, label)


def number_op(space: Space, mode: int = 0) -> Operator:
    if not 0 <= mode < space.n_modes:
        raise ValidationError(f"mode index {mode} invalid for {space.n_modes} mode(s)")
    n1 = np.diag(np.arange(space.n_max + 1)).astype(complex)
    label = "n_a" if mode == 0 else "n_b"
    return Operator(_photon_only(space, n1, mode), space, label)


def _atomic_collective_plain(space: Space, bra: int, ket: int) -> np.ndarray:
    """sum_k |bra_k><ket_k| on the atomic factor, for plain levels 0/1/2."""
    d = space.atomic_dim
    out = np.zeros((d, d), dtype=complex)
    if space.representation == "product":
        index = {conf: i for i, conf in enumerate(space.atomic_basis)}
        for j, conf in enumerate(space.atomic_basis):
            for k in range(space.n_atoms):
                if conf[k] == ket:
                    new = list(conf)
                    new[k] = bra
                    out[index[tuple(new)], j] += 1.0
    else:
        index = {occ: i for i, occ in enumerate(space.atomic_basis)}
        for j, occ in enumerate(space.atomic_basis):
            if bra == ket:
                out[j, j] += occ[ket]
                continue
            if occ[ket] == 0:
                continue
            new = list(occ)
            new[ket] -= 1
            new[bra] += 1
            i = index[tuple(new)]
            out[i, j] += math.sqrt(occ[ket] * (occ[bra] + 1))
    return out


def collective(space: Space, bra, ket) -> Operator:
    """Collective transition operator S_{bra,ket} = sum_k |bra_k><ket_k|.

    Levels may be 0, 1, 2 or the metastable superpositions '+', '-' with
    |+-> = (|0> +- |1>)/sqrt(2); the latter require level 1 to exist.
    Identity on all photon factors.
    """
    bra, ket = _as_level(bra), _as_level(ket)
    for lv in (bra, ket):
        if lv in _PM and space.levels < 2:
            raise ValidationError("'+'/'-' levels need levels 0 and 1")
        if lv == "2" and space.levels < 3:
            raise ValidationError("level 2 requested on a two-level space")

    # expand +/- into 0/1 combinations: |+-> = (|0> +- |1>)/sqrt(2)
    def expand(lv):
        if lv == "+":
            return [(0, 1 / math.sqrt(2)), (1, 1 / math.sqrt(2))]
        if lv == "-":
            return [(0, 1 / math.sqrt(2)), (1, -1 / math.sqrt(2))]
        return [(int(lv), 1.0)]

    d = space.atomic_dim
    at = np.zeros((d, d), dtype=complex)
    for b, cb in expand(bra):
        for k, ck in expand(ket):
            at += cb * np.conj(ck) * _atomic_collective_plain(space, b, k)
    mat = np.kron(np.eye(space.photon_dim), at)
    return Operator(mat, space, f"S_{bra}{ket}")


def s3(space: Space) -> Operator:
    """S_3 = sum_k (|+_k><+_k| - |-_k><-_k|)."""
    op = collective(space, "+", "+") - collective(space, "-", "-")
    return Operator(op.matrix, space, "S_3")


def _atomic_state(space: Space, atoms) -> np.ndarray:
    """Atomic-factor state vector from a label string or an occupation tuple."""
    if isinstance(atoms, (tuple, list)) and space.representation == "symmetric" \
            and all(isinstance(x, (int, np.integer)) for x in atoms):
        occ = tuple(int(x) for x in atoms)
        if len(occ) != space.levels or sum(occ) != space.n_atoms or min(occ) < 0:
            raise ValidationError(f"occupation {occ} invalid for this space")
        v = np.zeros(space.atomic_dim, dtype=complex)
        v[space.atomic_basis.index(occ)] = 1.0
        return v

    labels = [_as_level(c) for c in atoms]
    if len(labels) != space.n_atoms:
        raise ValidationError(
            f"need {space.n_atoms} atomic labels, got {len(labels)}"
        )
    for lv in labels:
        if lv == "2" and space.levels < 3:
            raise ValidationError("level 2 requested on a two-level space")

    def single(lv):
        v = np.zeros(space.levels, dtype=complex)
        if lv in _PM:
            v[0] = 1 / math.sqrt(2)
            v[1] = 0.5**0.5 if lv == "+" else -(0.5**0.5)
        else:
            v[int(lv)] = 1.0
        return v

    if space.representation == "product":
        out = np.array([1.0], dtype=complex)
        for lv in labels:
            out = np.kron(out, single(lv))
        return out

    # symmetric representation: all atoms must carry the same label
    if len(set(labels)) != 1:
        raise ValidationError(
            "symmetric representation only holds permutation-symmetric "
            f"product states; per-atom labels {atoms!r} are not uniform"
        )
    lv = labels[0]
    v = np.zeros(space.atomic_dim, dtype=complex)
    if lv not in _PM:
        occ = [0] * space.levels
        occ[int(lv)] = space.n_atoms
        v[space.atomic_basis.index(tuple(occ))] = 1.0
        return v
    # (|0> +- |1>)^{(x) N} expanded over symmetric occupations
    sign = 1.0 if lv == "+" else -1.0
    n = space.n_atoms
    for i, occ in enumerate(space.atomic_basis):
        if space.levels == 3 and occ[2] != 0:
            continue
        m1 = occ[1]
        v[i] = sign**m1 * math.sqrt(math.comb(n, m1)) / 2 ** (n / 2)
    return v


def basis_state(space: Space, photons, atoms) -> np.ndarray:
    """Unit-norm basis (or +/- superposition) state vector.

    ``photons``: int or per-mode sequence. ``atoms``: per-atom label string
    like ``"0-+"`` (product), or in the symmetric representation either a
    uniform label string or an occupation tuple like ``(1, 1, 0)``.
    """
    ns = _photon_tuple(space, photons)
    at = _atomic_state(space, atoms)
    ph = np.zeros(space.photon_dim, dtype=complex)
    idx = 0
    for n in ns:
        idx = idx * (space.n_max + 1) + n
    ph[idx] = 1.0
    v = np.kron(ph, at)
    return v / np.linalg.norm(v)


def all_minus_state(space: Space, photons=0) -> np.ndarray:
    """|photons> (x) |-)^N, the standard initial state of the scheme."""
    return basis_state(space, photons, "-" * space.n_atoms)


def plus_population(space: Space, state: np.ndarray) -> float:
    """Expectation of sum_k |+_k><+_k| (number of atoms found in |+>)."""
    val = collective(space, "+", "+").expectation(state)
    return float(val.real)
