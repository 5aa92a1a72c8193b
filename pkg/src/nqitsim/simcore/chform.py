"""Phase-exact stabilizer states in CH form.

A state is stored as ``omega * U_C U_H |s>`` where ``U_C`` is a Clifford built from
S, CZ and CX (so it fixes ``|0^n>``), ``U_H`` is a layer of Hadamards on the qubits with
``v = 1`` and ``s`` is a basis string. ``U_C`` is kept as its conjugation table::

    U_C^dag Z_p U_C = prod_j Z_j^G[p, j]
    U_C^dag X_p U_C = i^gamma[p] prod_j X_j^F[p, j] prod_j Z_j^M[p, j]

The global phase ``omega`` is tracked, so basis amplitudes come out exactly (up to
floating point) rather than up to phase.
"""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit

_SQ = 1 / np.sqrt(2)
_IPOW = np.array([1, 1j, -1, -1j])

# single-qubit states S^m H^v |b>, used to re-express the pivot qubit after a Hadamard
_H = np.array([[_SQ, _SQ], [_SQ, -_SQ]])
_S = np.diag([1, 1j])
_CANDIDATES = []
for _b in (0, 1):
    _e = np.eye(2)[_b]
    _CANDIDATES.append((0, 0, _b, _e.astype(complex)))
    _CANDIDATES.append((0, 1, _b, (_H @ _e).astype(complex)))
    _CANDIDATES.append((1, 1, _b, _S @ _H @ _e))


def _decompose_single(vec: np.ndarray) -> tuple[int, int, int, complex]:
    for m, v, b, cand in _CANDIDATES:
        overlap = np.vdot(cand, vec)
        if abs(abs(overlap) - 1) < 1e-9:
            return m, v, b, complex(overlap)
    raise AssertionError(f"not a single-qubit stabilizer state: {vec}")


class CHState:
    """Mutable n-qubit stabilizer state, initialised to ``|0^n>``."""

    def __init__(self, n: int):
        self.n = n
        eye = np.eye(n, dtype=np.uint8)
        self.F = eye.copy()
        self.G = eye.copy()
        self.M = np.zeros((n, n), dtype=np.uint8)
        self.gamma = np.zeros(n, dtype=np.int64)
        self.v = np.zeros(n, dtype=np.uint8)
        self.s = np.zeros(n, dtype=np.uint8)
        self.omega = 1.0 + 0j

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> "CHState":
        state = cls(circuit.n_qubits)
        state.apply_circuit(circuit)
        return state

    def copy(self) -> "CHState":
        other = CHState.__new__(CHState)
        other.n = self.n
        for name in ("F", "G", "M", "gamma", "v", "s"):
            setattr(other, name, getattr(self, name).copy())
        other.omega = self.omega
        return other

    # -- gates ----------------------------------------------------------------------

    def apply_circuit(self, circuit: Circuit) -> None:
        for g in circuit.gates:
            self.apply(g.kind, g.targets)

    def apply(self, kind: str, targets: tuple[int, ...]) -> None:
        if kind == "H":
            self.h(targets[0])
        elif kind == "CZ":
            self.cz(*targets)
        elif kind == "CX":
            self.cx(*targets)
        elif kind == "S":
            self.s_gate(targets[0])
        elif kind == "X":
            self.x(targets[0])
        elif kind == "Z":
            self.z(targets[0])
        elif kind == "Y":
            self.y(targets[0])
        else:
            raise ValueError(f"{kind} is not a Clifford gate")

    def s_gate(self, q: int) -> None:
        self.M[q] ^= self.G[q]
        self.gamma[q] = (self.gamma[q] - 1) % 4

    def cz(self, q: int, r: int) -> None:
        self.M[q] ^= self.G[r]
        self.M[r] ^= self.G[q]

    def cx(self, c: int, t: int) -> None:
        F, M = self.F, self.M
        self.gamma[c] = (self.gamma[c] + self.gamma[t] + 2 * int(np.dot(M[c], F[t]) & 1)) % 4
        F[c] ^= F[t]
        M[c] ^= M[t]
        self.G[t] ^= self.G[c]

    def _x_image(self, q: int) -> tuple[np.ndarray, complex]:
        # U_H (U_C^dag X_q U_C) U_H applied to |s>: returns (new basis string, phase)
        v, s = self.v, self.s
        f, m = self.F[q], self.M[q]
        nv = 1 - v
        t = s ^ (f & nv) ^ (m & v)
        zpart = (m & nv) ^ (f & v)
        parity = int(np.dot(f & m, v) + np.dot(zpart, s)) & 1
        return t, _IPOW[self.gamma[q] % 4] * (1 - 2 * parity)

    def _z_image(self, q: int) -> tuple[np.ndarray, complex]:
        v, s = self.v, self.s
        g = self.G[q]
        u = s ^ (g & v)
        parity = int(np.dot(g & (1 - v), s)) & 1
        return u, 1 - 2 * parity

    def x(self, q: int) -> None:
        self.s, phase = self._x_image(q)
        self.omega *= phase

    def z(self, q: int) -> None:
        self.s, phase = self._z_image(q)
        self.omega *= phase

    def y(self, q: int) -> None:
        self.z(q)
        self.x(q)
        self.omega *= 1j

    # right multiplication of U_C, used by the Hadamard update
    def _right_s(self, q: int) -> None:
        fq = self.F[:, q]
        self.gamma = (self.gamma - fq.astype(np.int64)) % 4
        self.M[:, q] ^= fq

    def h(self, q: int) -> None:
        t, c1 = self._x_image(q)
        u, c2 = self._z_image(q)
        y = t ^ u
        if not y.any():
            self.s = t
            self.omega *= (c1 + c2) * _SQ
            return
        ratio = c2 / c1  # i**delta
        v = self.v
        F, G, M = self.F, self.G, self.M
        v0 = np.flatnonzero(y & (1 - v))
        v1 = np.flatnonzero(y & v)
        if v0.size:
            p = v0[0]
            rest = v0[1:]
            # right-multiply by CX(p -> j), j in rest, and CZ(p, j), j in v1
            if rest.size:
                F[:, rest] ^= F[:, [p]]
                M[:, p] ^= np.bitwise_xor.reduce(M[:, rest], axis=1)
                G[:, p] ^= np.bitwise_xor.reduce(G[:, rest], axis=1)
            if v1.size:
                fp = F[:, p]
                fj = F[:, v1]
                pairs = (fj & fp[:, None]).sum(axis=1, dtype=np.int64)
                self.gamma = (self.gamma + 2 * (pairs & 1)) % 4
                M[:, p] ^= np.bitwise_xor.reduce(fj, axis=1)
                M[:, v1] ^= fp[:, None]
        else:
            p = v1[0]
            rest = v1[1:]
            # right-multiply by CX(j -> p), j in rest
            F[:, p] ^= np.bitwise_xor.reduce(F[:, rest], axis=1)
            M[:, rest] ^= M[:, [p]]
            G[:, rest] ^= G[:, [p]]
        a = int(t[p])
        s_new = t.copy()
        others = y.copy()
        others[p] = 0
        s_new[others.astype(bool)] ^= a
        vec = np.zeros(2, dtype=complex)
        vec[a] = _SQ
        vec[1 - a] = ratio * _SQ
        if v[p]:
            vec = _H @ vec
        m, v_new, b, phase = _decompose_single(vec)
        if m:
            self._right_s(p)
        v[p] = v_new
        s_new[p] = b
        self.s = s_new
        self.omega *= c1 * phase

    # -- amplitudes -----------------------------------------------------------------

    def amplitudes(self, xs: np.ndarray) -> np.ndarray:
        """Amplitudes <x|state> for each row of the (K, n) bit array ``xs``."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.uint8))
        n = self.n
        if xs.shape[1] != n:
            raise ValueError(f"outcomes have {xs.shape[1]} bits, state has {n} qubits")
        if n == 0:
            return np.full(xs.shape[0], self.omega)
        xf = xs.astype(np.float64)
        a = (xf @ self.F).astype(np.int64) & 1
        b = (xf @ self.M).astype(np.int64) & 1
        cross = (self.M.astype(np.float64) @ self.F.T.astype(np.float64)).astype(np.int64) & 1
        cross = np.triu(cross, 1).astype(np.float64)
        quad = (((xf @ cross) * xf).sum(axis=1)).astype(np.int64)
        e = (xs.astype(np.int64) @ self.gamma + 2 * quad) % 4
        v = self.v.astype(bool)
        s = self.s.astype(np.int64)
        support = np.all(a[:, ~v] == s[~v], axis=1)
        sign = ((a * b).sum(axis=1) + (a[:, v] * s[v]).sum(axis=1)) & 1
        mag = _SQ ** int(v.sum())
        return np.where(support, self.omega * _IPOW[e] * (1 - 2 * sign) * mag, 0.0)

    def amplitude(self, x) -> complex:
        return complex(self.amplitudes(np.asarray(x, dtype=np.uint8)[None, :])[0])
