"""Pauli strings, Pauli-sum observables, and the built-in test Hamiltonians.

Qubits are numbered from right to left: the last character of a Pauli word
acts on qubit 0.  Dense matrices are therefore Kronecker products taken in
word order, with qubit 0 as the least significant basis bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

FORMAT_VERSION = 1

# Dense matrices stay practical only for a handful of qubits.
MAX_DENSE_QUBITS = 4

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

_ANSATZ_QUBITS = {"one_qubit_ry": 1, "two_qubit_ucc": 2}


class NoClosedFormError(ValueError):
    """Raised when no closed-form expectation is tabulated for a pair."""


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis, e.g. ``"IZ"`` (Z on qubit 0)."""

    word: str

    def __post_init__(self) -> None:
        if not self.word:
            raise ValueError("Pauli word must be non-empty")
        bad = set(self.word) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)!r} in {self.word!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return set(self.word) == {"I"}

    def letter(self, qubit: int) -> str:
        """Pauli letter acting on ``qubit`` (qubit 0 is the rightmost character)."""
        if not 0 <= qubit < self.n_qubits:
            raise ValueError(f"qubit {qubit} out of range for {self.word!r}")
        return self.word[self.n_qubits - 1 - qubit]

    @property
    def support(self) -> tuple[int, ...]:
        """Qubits on which the string acts non-trivially, ascending."""
        n = self.n_qubits
        return tuple(q for q in range(n) if self.word[n - 1 - q] != "I")

    def dense(self) -> np.ndarray:
        """2^n x 2^n matrix of the string, qubit 0 least significant."""
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise ValueError(
                f"dense matrix limited to {MAX_DENSE_QUBITS} qubits, got {self.n_qubits}"
            )
        out = np.array([[1.0 + 0.0j]])
        for letter in self.word:
            out = np.kron(out, _PAULI_1Q[letter])
        return out

    def __str__(self) -> str:
        return self.word


@dataclass(frozen=True)
class PauliSum:
    """Real linear combination of Pauli strings on a fixed register."""

    terms: tuple[tuple[float, PauliString], ...]
    n_qubits: int

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("PauliSum needs at least one term")
        seen: set[str] = set()
        for coeff, string in self.terms:
            if string.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term {string.word!r} acts on {string.n_qubits} qubits, "
                    f"register has {self.n_qubits}"
                )
            if string.word in seen:
                raise ValueError(f"duplicate term {string.word!r}")
            seen.add(string.word)
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient for {string.word!r}")

    @classmethod
    def from_pairs(cls, pairs: list[tuple[float, str]]) -> "PauliSum":
        terms = tuple((float(c), PauliString(w)) for c, w in pairs)
        return cls(terms=terms, n_qubits=terms[0][1].n_qubits)

    @property
    def identity_coefficient(self) -> float:
        for coeff, string in self.terms:
            if string.is_identity:
                return coeff
        return 0.0

    def non_identity_terms(self) -> list[tuple[float, PauliString]]:
        return [(c, s) for c, s in self.terms if not s.is_identity]

    def coefficient(self, word: str) -> float:
        for coeff, string in self.terms:
            if string.word == word:
                return coeff
        raise KeyError(word)

    def dense(self) -> np.ndarray:
        dim = 2 ** self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for coeff, string in self.terms:
            out += coeff * string.dense()
        return out

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class AnsatzSpec:
    """State-preparation family: a named circuit plus its single angle."""

    kind: str
    theta: float

    def __post_init__(self) -> None:
        if self.kind not in _ANSATZ_QUBITS:
            raise ValueError(
                f"unknown ansatz kind {self.kind!r}, expected one of "
                f"{sorted(_ANSATZ_QUBITS)}"
            )
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")

    @property
    def n_qubits(self) -> int:
        return _ANSATZ_QUBITS[self.kind]


def ansatz_state(ansatz: AnsatzSpec) -> np.ndarray:
    """Statevector prepared by the ansatz circuit.

    ``one_qubit_ry`` is RY(theta) on |0>.  ``two_qubit_ucc`` is
    exp(-i theta/2 X_1 Y_0) applied to |01>, which reduces to
    cos(theta/2)|01> - sin(theta/2)|10> because the generator squares
    to the identity.
    """
    half = ansatz.theta / 2.0
    if ansatz.kind == "one_qubit_ry":
        return np.array([math.cos(half), math.sin(half)], dtype=complex)
    psi = np.zeros(4, dtype=complex)
    psi[0b01] = math.cos(half)
    psi[0b10] = -math.sin(half)
    return psi


def oracle_expectation(ansatz: AnsatzSpec, string: PauliString) -> float:
    """<A| P |A> from the dense statevector; authoritative for every pair."""
    if string.n_qubits != ansatz.n_qubits:
        raise ValueError(
            f"{string.word!r} acts on {string.n_qubits} qubits, "
            f"ansatz {ansatz.kind!r} prepares {ansatz.n_qubits}"
        )
    psi = ansatz_state(ansatz)
    value = np.vdot(psi, string.dense() @ psi)
    return float(value.real)


def analytic_expectation(ansatz: AnsatzSpec, string: PauliString) -> float:
    """Closed-form <A| P |A> for the tabulated (ansatz, string) pairs.

    Only the pairs needed by the built-in Hamiltonians are tabulated;
    everything else (including the two-qubit ZZ term, whose value is left
    to the exact computation on purpose) raises ``NoClosedFormError`` so
    the caller falls back to :func:`oracle_expectation`.
    """
    if string.n_qubits != ansatz.n_qubits:
        raise ValueError(
            f"{string.word!r} acts on {string.n_qubits} qubits, "
            f"ansatz {ansatz.kind!r} prepares {ansatz.n_qubits}"
        )
    theta = ansatz.theta
    if ansatz.kind == "one_qubit_ry":
        table = {"I": 1.0, "Z": math.cos(theta), "X": math.sin(theta)}
    else:
        table = {
            "II": 1.0,
            "IZ": -math.cos(theta),
            "ZI": math.cos(theta),
            "XX": -math.sin(theta),
            "YY": -math.sin(theta),
        }
    try:
        return table[string.word]
    except KeyError:
        raise NoClosedFormError(
            f"no closed form for ({ansatz.kind}, {string.word}); "
            "use oracle_expectation"
        ) from None


def angle_for_expectation(kind: str, string: PauliString, value: float) -> float:
    """Angle theta such that the ansatz hits a prescribed expectation value.

    Inverts the closed forms above for the invertible pairs; used to sweep
    a term's expectation over a grid when generating likelihood curves.
    """
    if kind not in _ANSATZ_QUBITS:
        raise ValueError(f"unknown ansatz kind {kind!r}")
    if not -1.0 <= value <= 1.0:
        raise ValueError(f"expectation value {value} outside [-1, 1]")
    if kind == "one_qubit_ry":
        inverses = {"Z": lambda v: math.acos(v), "X": lambda v: math.asin(v)}
    else:
        inverses = {
            "IZ": lambda v: math.acos(-v),
            "ZI": lambda v: math.acos(v),
            "XX": lambda v: -math.asin(v),
            "YY": lambda v: -math.asin(v),
        }
    try:
        return inverses[string.word](value)
    except KeyError:
        raise NoClosedFormError(
            f"({kind}, {string.word}) has no invertible closed form"
        ) from None


def h2_one_qubit() -> PauliSum:
    """One-qubit hydrogen test Hamiltonian (coefficients in Hartree)."""
    return PauliSum.from_pairs(
        [(-0.329, "I"), (0.181, "X"), (-0.788, "Z")]
    )


def h2_two_qubit() -> PauliSum:
    """Two-qubit hydrogen test Hamiltonian (coefficients in Hartree)."""
    return PauliSum.from_pairs(
        [
            (0.2388, "II"),
            (0.3466, "IZ"),
            (-0.4439, "ZI"),
            (0.5736, "ZZ"),
            (0.09075, "XX"),
            (0.09075, "YY"),
        ]
    )


# Reference angles used throughout the examples; each sits at the variational
# minimum of the corresponding Hamiltonian to within ~1e-3.
THETA_ONE_QUBIT = -6.5095
THETA_TWO_QUBIT = -6.0575

_HAMILTONIANS = {
    "one_qubit": (h2_one_qubit, "one_qubit_ry", THETA_ONE_QUBIT),
    "two_qubit": (h2_two_qubit, "two_qubit_ucc", THETA_TWO_QUBIT),
}


def builtin_problem(name: str, theta: float | None = None) -> tuple[PauliSum, AnsatzSpec]:
    """Hamiltonian plus matching ansatz for a built-in problem name."""
    try:
        build, kind, default_theta = _HAMILTONIANS[name]
    except KeyError:
        raise ValueError(
            f"unknown hamiltonian {name!r}, expected one of {sorted(_HAMILTONIANS)}"
        ) from None
    return build(), AnsatzSpec(kind=kind, theta=default_theta if theta is None else theta)


def exact_ground_energy(h: PauliSum) -> float:
    """Smallest eigenvalue of the dense Hamiltonian matrix."""
    return float(np.linalg.eigvalsh(h.dense())[0])


def hamiltonian_to_dict(h: PauliSum, ansatz: AnsatzSpec | None = None) -> dict:
    doc: dict = {
        "version": FORMAT_VERSION,
        "n_qubits": h.n_qubits,
        "terms": [{"coeff": c, "word": s.word} for c, s in h.terms],
        "ansatz": None,
    }
    if ansatz is not None:
        doc["ansatz"] = {"kind": ansatz.kind, "theta": ansatz.theta}
    return doc


def hamiltonian_from_dict(doc: dict) -> tuple[PauliSum, AnsatzSpec | None]:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported hamiltonian format version {doc.get('version')!r}")
    terms = tuple(
        (float(t["coeff"]), PauliString(str(t["word"]))) for t in doc["terms"]
    )
    h = PauliSum(terms=terms, n_qubits=int(doc["n_qubits"]))
    ansatz = None
    if doc.get("ansatz") is not None:
        ansatz = AnsatzSpec(kind=doc["ansatz"]["kind"], theta=float(doc["ansatz"]["theta"]))
    return h, ansatz


def save_hamiltonian(path: str, h: PauliSum, ansatz: AnsatzSpec | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(hamiltonian_to_dict(h, ansatz), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_hamiltonian(path: str) -> tuple[PauliSum, AnsatzSpec | None]:
    with open(path, encoding="utf-8") as fh:
        return hamiltonian_from_dict(json.load(fh))
