"""Finite logical matrices over the bounded-lattice-with-negation signature.

A matrix is a finite algebra (meet, join, negation, top, bottom) together
with a set of designated elements.  Rule validity is decided by exhaustive
valuation of the rule's atoms; the enumeration is vectorized with numpy.

Every matrix here is a bounded distributive lattice, so it embeds into a
powerset lattice (Birkhoff).  We keep that embedding around as per-element
bitmasks: meet and join become bitwise AND/OR, which is what makes sweeps
over matrices with thousands of elements affordable.  Large matrices skip
the n x n operation tables entirely and work from the masks.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .formula import And, Atom, Formula, Neg, Or, RuleInstance, _Bot, _Top

__all__ = [
    "FinMatrix", "MatrixError", "Partition", "MatrixMap",
    "evaluate", "validates", "find_countervaluation",
    "product", "submatrices",
    "leibniz_congruence", "leibniz_reduct", "quotient_by", "principal_congruence",
    "find_isomorphism", "is_matrix_isomorphism", "split_at", "free_dm_algebra",
    "bd4", "k3", "lp3", "cl2", "etl4", "kminus8", "dm4_algebra", "catalog",
]

# Above TABLE_LIMIT, operation tables are not materialized.  Algebra laws
# are checked exhaustively in n^3 up to FULL_LAW_LIMIT, exhaustively in n^2
# (with sampled triple laws) up to TABLE_LIMIT, and on deterministic samples
# beyond; constructions above that size are correct by construction
# (componentwise products, upset lattices).
TABLE_LIMIT = 1500
FULL_LAW_LIMIT = 100
LAW_SAMPLES = 1024

DM4_MEET = ((0, 0, 0, 0), (0, 1, 0, 1), (0, 0, 2, 2), (0, 1, 2, 3))
DM4_JOIN = ((0, 1, 2, 3), (1, 1, 3, 3), (2, 3, 2, 3), (3, 3, 3, 3))
DM4_NEG = (3, 1, 2, 0)  # bottom<->top, both fixpoints stay put


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Element-indexed block ids, normalized by first occurrence."""

    blocks: tuple[int, ...]

    @staticmethod
    def of(ids: Sequence[int]) -> "Partition":
        seen: dict[int, int] = {}
        out = []
        for b in ids:
            if b not in seen:
                seen[b] = len(seen)
            out.append(seen[b])
        return Partition(tuple(out))

    @property
    def n_blocks(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    def block_sets(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.n_blocks)]
        for i, b in enumerate(self.blocks):
            out[b].add(i)
        return [frozenset(s) for s in out]

    def is_identity(self) -> bool:
        return self.n_blocks == len(self.blocks)

    def same(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]


class FinMatrix:
    """Immutable finite matrix; validated on construction."""

    def __init__(
        self,
        labels: Sequence[str],
        neg: Sequence[int],
        top: int,
        bottom: int,
        designated: Iterable[int],
        flags: Iterable[str] = (),
        *,
        meet: Optional[Sequence[Sequence[int]]] = None,
        join: Optional[Sequence[Sequence[int]]] = None,
        enc: Optional[Sequence[int]] = None,
        validate: bool = True,
    ):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.neg = tuple(neg)
        self.top = top
        self.bottom = bottom
        self.designated = frozenset(designated)
        self.flags = frozenset(flags)
        self._meet = tuple(tuple(row) for row in meet) if meet is not None else None
        self._join = tuple(tuple(row) for row in join) if join is not None else None
        self.enc = tuple(enc) if enc is not None else None
        self._cache: dict[str, object] = {}
        if self._meet is None and self.enc is None:
            raise MatrixError("need operation tables or a powerset encoding")
        for table in (self._meet, self._join):
            if table is not None and (
                len(table) != self.n
                or any(len(row) != self.n for row in table)
                or any(not 0 <= v < self.n for row in table for v in row)
            ):
                raise MatrixError("operation table is not an n x n index table")
        if self.enc is None and self.n <= TABLE_LIMIT:
            self.enc = self._compute_enc()
        if self.enc is not None:
            self.nbits = max(self.enc).bit_length() if self.n else 0
        else:
            self.nbits = -1
        if validate:
            self.validate()

    # -- basic operations ------------------------------------------------

    def meet(self, x: int, y: int) -> int:
        if self._meet is not None:
            return self._meet[x][y]
        return self._enc_index()[self.enc[x] & self.enc[y]]

    def join(self, x: int, y: int) -> int:
        if self._join is not None:
            return self._join[x][y]
        return self._enc_index()[self.enc[x] | self.enc[y]]

    def leq(self, x: int, y: int) -> bool:
        if self.enc is not None:
            return self.enc[x] & self.enc[y] == self.enc[x]
        return self.meet(x, y) == x

    def is_designated(self, x: int) -> bool:
        return x in self.designated

    def _enc_index(self) -> dict[int, int]:
        idx = self._cache.get("enc_index")
        if idx is None:
            idx = {m: i for i, m in enumerate(self.enc)}
            self._cache["enc_index"] = idx
        return idx

    def meet_table(self) -> np.ndarray:
        t = self._cache.get("np_meet")
        if t is None:
            if self._meet is not None:
                t = np.array(self._meet, dtype=np.int32)
            else:
                if self.n > TABLE_LIMIT:
                    raise MatrixError(f"refusing to materialize {self.n}x{self.n} table")
                e = self._enc_np()
                t = self._mask_lookup(e[:, None] & e[None, :])
            self._cache["np_meet"] = t
        return t

    def join_table(self) -> np.ndarray:
        t = self._cache.get("np_join")
        if t is None:
            if self._join is not None:
                t = np.array(self._join, dtype=np.int32)
            else:
                if self.n > TABLE_LIMIT:
                    raise MatrixError(f"refusing to materialize {self.n}x{self.n} table")
                e = self._enc_np()
                t = self._mask_lookup(e[:, None] | e[None, :])
            self._cache["np_join"] = t
        return t

    def _enc_np(self) -> np.ndarray:
        e = self._cache.get("np_enc")
        if e is None:
            if self.enc is None or self.nbits > 64:
                raise MatrixError("no machine-word encoding available")
            e = np.array(self.enc, dtype=np.uint64)
            self._cache["np_enc"] = e
        return e

    def _mask_lookup(self, masks: np.ndarray) -> np.ndarray:
        """Map an array of masks to element indices."""
        lut = self._cache.get("mask_lut")
        if lut is None:
            order = np.argsort(self._enc_np(), kind="stable")
            lut = (self._enc_np()[order], order.astype(np.int32))
            self._cache["mask_lut"] = lut
        sorted_masks, order = lut
        pos = np.searchsorted(sorted_masks, masks)
        if not np.array_equal(sorted_masks[pos], masks):
            raise MatrixError("operation left the carrier (encoding not closed)")
        return order[pos]

    # -- construction helpers --------------------------------------------

    def _leq_matrix(self) -> np.ndarray:
        if self.enc is not None and self.nbits <= 64:
            e = self._enc_np()
            return (e[:, None] & e[None, :]) == e[:, None]
        mt = self.meet_table()
        return mt == np.arange(self.n, dtype=np.int32)[:, None]

    def _compute_enc(self) -> tuple[int, ...]:
        """Birkhoff embedding: bit j of enc[x] says the j-th join-irreducible
        lies below x."""
        mt = self.meet_table()
        leq = mt == np.arange(self.n, dtype=np.int32)[:, None]
        jt = self.join_table()
        jis = []
        for x in range(self.n):
            if x == self.bottom:
                continue
            below = [y for y in range(self.n) if leq[y, x] and y != x]
            if not below:
                jis.append(x)
                continue
            j = below[0]
            for y in below[1:]:
                j = int(jt[j, y])
            if j != x:
                jis.append(x)
        enc = []
        for x in range(self.n):
            m = 0
            for b, j in enumerate(jis):
                if leq[j, x]:
                    m |= 1 << b
            enc.append(m)
        return tuple(enc)

    def join_irreducibles(self) -> list[int]:
        """Indices of join-irreducible elements (the least element containing
        each encoding bit)."""
        if self.enc is None:
            raise MatrixError("no encoding; matrix too large without one")
        idx = self._enc_index()
        if self.nbits <= 64 and self.n > 64:
            e = self._enc_np()
            seen = int(np.bitwise_or.reduce(e)) if self.n else 0
            out = set()
            for b in range(self.nbits):
                if not seen >> b & 1:
                    continue
                members = e[(e >> np.uint64(b) & np.uint64(1)) == 1]
                out.add(idx[int(np.bitwise_and.reduce(members))])
            return sorted(out)
        bits_seen = 0
        for m in self.enc:
            bits_seen |= m
        out = set()
        for b in range(self.nbits):
            if not bits_seen >> b & 1:
                continue
            acc = None
            for m in self.enc:
                if m >> b & 1:
                    acc = m if acc is None else acc & m
            out.add(idx[acc])
        return sorted(out)

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        n = self.n
        if n == 0:
            raise MatrixError("empty carrier")
        if len(self.neg) != n or not all(0 <= v < n for v in self.neg):
            raise MatrixError("bad negation vector")
        if not (0 <= self.top < n and 0 <= self.bottom < n):
            raise MatrixError("bad bounds")
        if not all(0 <= d < n for d in self.designated):
            raise MatrixError("bad designated set")
        if self.enc is not None:
            if len(set(self.enc)) != n:
                raise MatrixError("encoding not injective")
            full = self.enc[self.top]
            if self.enc[self.bottom] != 0 or any(m & ~full for m in self.enc):
                raise MatrixError("encoding bounds broken")
        if n <= FULL_LAW_LIMIT:
            self._check_laws_exhaustive()
        elif self.enc is not None:
            # bitwise AND/OR satisfies every bounded-distributive-lattice law
            # by set theory; the remaining content (carrier closure, table
            # agreement) is checked on a sample here and again exactly at
            # every use, since mask lookups reject escapes from the carrier
            self._check_laws_sampled()
        elif n <= TABLE_LIMIT:
            self._check_laws_pairwise()
        else:
            self._check_laws_sampled()
        if "demorgan" in self.flags:
            self._check_demorgan()

    def _sample_indices(self, count: int = LAW_SAMPLES) -> np.ndarray:
        rng = np.random.default_rng(0)
        return rng.integers(0, self.n, size=(3, count), dtype=np.int64)

    def _op_arrays(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized meet and join of index arrays."""
        have_tables = self._meet is not None or "np_meet" in self._cache
        if not have_tables and self.enc is not None and self.nbits <= 64:
            e = self._enc_np()
            return self._mask_lookup(e[x] & e[y]), self._mask_lookup(e[x] | e[y])
        mt, jt = self.meet_table(), self.join_table()
        return mt[x, y], jt[x, y]

    def _check_laws_exhaustive(self) -> None:
        mt, jt = self.meet_table(), self.join_table()
        n = self.n
        idx = np.arange(n, dtype=np.int32)
        if not (np.array_equal(mt, mt.T) and np.array_equal(jt, jt.T)):
            raise MatrixError("commutativity fails")
        if not (np.array_equal(mt[idx, idx], idx) and np.array_equal(jt[idx, idx], idx)):
            raise MatrixError("idempotence fails")
        if not np.array_equal(mt[idx[:, None], jt], np.broadcast_to(idx[:, None], (n, n))):
            raise MatrixError("absorption fails")
        if not np.array_equal(jt[idx[:, None], mt], np.broadcast_to(idx[:, None], (n, n))):
            raise MatrixError("absorption fails")
        # associativity and distributivity, full n^3
        if not np.array_equal(mt[mt, :], mt[:, mt]):
            raise MatrixError("meet associativity fails")
        if not np.array_equal(jt[jt, :], jt[:, jt]):
            raise MatrixError("join associativity fails")
        # x & (y | z) == (x & y) | (x & z)
        if not np.array_equal(mt[:, jt], jt[mt[:, :, None], mt[:, None, :]]):
            raise MatrixError("distributivity fails")
        if not (np.array_equal(mt[self.bottom], np.full(n, self.bottom, dtype=np.int32))
                and np.array_equal(jt[self.top], np.full(n, self.top, dtype=np.int32))
                and np.array_equal(mt[self.top], idx) and np.array_equal(jt[self.bottom], idx)):
            raise MatrixError("bounds are not neutral/absorbing")

    def _check_laws_pairwise(self) -> None:
        """Exact n^2 laws plus sampled triple laws, via the tables."""
        mt, jt = self.meet_table(), self.join_table()
        n = self.n
        idx = np.arange(n, dtype=np.int32)
        if not (np.array_equal(mt, mt.T) and np.array_equal(jt, jt.T)):
            raise MatrixError("commutativity fails")
        if not (np.array_equal(mt[idx, idx], idx) and np.array_equal(jt[idx, idx], idx)):
            raise MatrixError("idempotence fails")
        if not np.array_equal(mt[idx[:, None], jt], np.broadcast_to(idx[:, None], (n, n))):
            raise MatrixError("absorption fails")
        if not np.array_equal(jt[idx[:, None], mt], np.broadcast_to(idx[:, None], (n, n))):
            raise MatrixError("absorption fails")
        if not (np.array_equal(mt[self.top], idx) and np.array_equal(jt[self.bottom], idx)):
            raise MatrixError("bounds are not neutral")
        x, y, z = self._sample_indices()
        if not np.array_equal(mt[mt[x, y], z], mt[x, mt[y, z]]):
            raise MatrixError("meet associativity fails")
        if not np.array_equal(jt[jt[x, y], z], jt[x, jt[y, z]]):
            raise MatrixError("join associativity fails")
        if not np.array_equal(mt[x, jt[y, z]], jt[mt[x, y], mt[x, z]]):
            raise MatrixError("distributivity fails")

    def _check_laws_sampled(self) -> None:
        """Vectorized sampled laws for carriers without materialized tables."""
        x, y, z = self._sample_indices()
        mxy, jxy = self._op_arrays(x, y)
        myx, jyx = self._op_arrays(y, x)
        if not (np.array_equal(mxy, myx) and np.array_equal(jxy, jyx)):
            raise MatrixError("commutativity fails")
        m_x_jxy, _ = self._op_arrays(x, jxy)
        _, j_x_mxy = self._op_arrays(x, mxy)
        if not (np.array_equal(m_x_jxy, x) and np.array_equal(j_x_mxy, x)):
            raise MatrixError("absorption fails")
        myz, jyz = self._op_arrays(y, z)
        m_xy_z, _ = self._op_arrays(mxy, z)
        m_x_yz, _ = self._op_arrays(x, myz)
        if not np.array_equal(m_xy_z, m_x_yz):
            raise MatrixError("meet associativity fails")
        m_x_jyz, _ = self._op_arrays(x, jyz)
        mxz, _ = self._op_arrays(x, z)
        _, j_mm = self._op_arrays(mxy, mxz)
        if not np.array_equal(m_x_jyz, j_mm):
            raise MatrixError("distributivity fails")
        tops = np.full_like(x, self.top)
        bots = np.full_like(x, self.bottom)
        m_top, _ = self._op_arrays(x, tops)
        _, j_bot = self._op_arrays(x, bots)
        if not (np.array_equal(m_top, x) and np.array_equal(j_bot, x)):
            raise MatrixError("bounds fail")

    def _check_demorgan(self) -> None:
        n = self.n
        ng = np.array(self.neg, dtype=np.int64)
        if not np.array_equal(ng[ng], np.arange(n, dtype=np.int64)):
            raise MatrixError("negation is not an involution")
        if self.neg[self.top] != self.bottom:
            raise MatrixError("negation must swap the bounds")
        exhaustive = n <= FULL_LAW_LIMIT or (
            self.enc is None and n <= TABLE_LIMIT)
        if exhaustive:
            mt, jt = self.meet_table(), self.join_table()
            if not np.array_equal(ng[jt], mt[ng[:, None], ng[None, :]]):
                raise MatrixError("De Morgan law fails")
        elif self.enc is not None and self.nbits <= 64:
            # vectorized on masks: ~(x | y) must be ~x & ~y elementwise
            e = self._enc_np()
            neg_e = e[ng]
            x, y, _ = self._sample_indices()
            if not np.array_equal(
                neg_e[self._mask_lookup(e[x] | e[y])], neg_e[x] & neg_e[y]
            ):
                raise MatrixError("De Morgan law fails")
        else:
            x, y, _ = self._sample_indices()
            _, jxy = self._op_arrays(x, y)
            m_neg, _ = self._op_arrays(ng[x], ng[y])
            if not np.array_equal(ng[jxy], m_neg):
                raise MatrixError("De Morgan law fails")

    def designated_is_prime_filter(self) -> bool:
        """Lattice filter with a | b designated only if a or b is."""
        if not self.is_bd_model():
            return False
        for a in range(self.n):
            for b in range(self.n):
                if self.join(a, b) in self.designated:
                    if a not in self.designated and b not in self.designated:
                        return False
        return True

    def is_bd_model(self) -> bool:
        """De Morgan matrix whose designated set is a lattice filter."""
        if "demorgan" not in self.flags:
            return False
        des = self.designated
        if not des or self.top not in des:
            return False
        for a in des:
            for b in des:
                if self.meet(a, b) not in des:
                    return False
            for x in range(self.n):
                if self.leq(a, x) and x not in des:
                    return False
        return True

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "elements": list(self.labels),
            "meet": [[self.meet(x, y) for y in range(self.n)] for x in range(self.n)],
            "join": [[self.join(x, y) for y in range(self.n)] for x in range(self.n)],
            "neg": list(self.neg),
            "top": self.top,
            "bottom": self.bottom,
            "designated": sorted(self.designated),
            "flags": sorted(self.flags),
        })

    @staticmethod
    def from_json(text: str) -> "FinMatrix":
        d = json.loads(text)
        return FinMatrix(
            [str(x) for x in d["elements"]],
            d["neg"], d["top"], d["bottom"], d["designated"], d.get("flags", []),
            meet=d["meet"], join=d["join"],
        )

    def relabel(self, labels: Sequence[str]) -> "FinMatrix":
        return FinMatrix(labels, self.neg, self.top, self.bottom, self.designated,
                         self.flags, meet=self._meet, join=self._join, enc=self.enc,
                         validate=False)

    def __repr__(self) -> str:
        return f"<FinMatrix n={self.n} designated={sorted(self.designated)} flags={sorted(self.flags)}>"


# -- evaluation and validity ----------------------------------------------


def evaluate(m: FinMatrix, v: Mapping[str, int], f: Formula) -> int:
    """Value of f under the valuation v (a structural fold)."""
    if isinstance(f, Atom):
        if f.name not in v:
            raise KeyError(f"valuation missing atom {f.name!r}")
        return v[f.name]
    if isinstance(f, Neg):
        return m.neg[evaluate(m, v, f.arg)]
    if isinstance(f, And):
        return m.meet(evaluate(m, v, f.left), evaluate(m, v, f.right))
    if isinstance(f, Or):
        return m.join(evaluate(m, v, f.left), evaluate(m, v, f.right))
    if isinstance(f, _Top):
        return m.top
    if isinstance(f, _Bot):
        return m.bottom
    raise TypeError(f)


_CHUNK_LIMIT = 1 << 22


class _Engine:
    """Vectorized valuation sweeps for one matrix.

    Values are carried either as powerset masks (meet/join are bitwise ops;
    needs <= 16 mask bits so negation/designation fit in lookup tables) or
    as element indices with table gathers.
    """

    def __init__(self, m: FinMatrix):
        self.m = m
        self.mask_mode = m.enc is not None and 0 <= m.nbits <= 16
        if self.mask_mode:
            size = 1 << m.nbits
            # the narrowest dtype that holds the masks: big sweeps move a
            # lot of these arrays around
            dt = np.uint8 if m.nbits <= 8 else np.uint16
            self.neg_lut = np.zeros(size, dtype=dt)
            self.des_lut = np.zeros(size, dtype=bool)
            self.elem_lut = np.full(size, -1, dtype=np.int32)
            for i, mask in enumerate(m.enc):
                self.neg_lut[mask] = m.enc[m.neg[i]]
                self.des_lut[mask] = i in m.designated
                self.elem_lut[mask] = i
            self.values = np.array(m.enc, dtype=dt)
            self.top_v = dt(m.enc[m.top])
            self.bot_v = dt(m.enc[m.bottom])
        else:
            self.meet_flat = m.meet_table().astype(np.int32).ravel()
            self.join_flat = m.join_table().astype(np.int32).ravel()
            self.neg_arr = np.array(m.neg, dtype=np.int32)
            self.des_arr = np.zeros(m.n, dtype=bool)
            for d in m.designated:
                self.des_arr[d] = True
            self.values = np.arange(m.n, dtype=np.int32)
            self.top_v = np.int32(m.top)
            self.bot_v = np.int32(m.bottom)

    def eval_formula(self, f: Formula, atom_arrays: Mapping[str, np.ndarray]) -> np.ndarray:
        if isinstance(f, Atom):
            return atom_arrays[f.name]
        if isinstance(f, Neg):
            a = self.eval_formula(f.arg, atom_arrays)
            if self.mask_mode:
                return self.neg_lut[a]
            return self.neg_arr[a]
        if isinstance(f, (And, Or)):
            a = self.eval_formula(f.left, atom_arrays)
            b = self.eval_formula(f.right, atom_arrays)
            if self.mask_mode:
                return (a & b) if isinstance(f, And) else (a | b)
            table = self.meet_flat if isinstance(f, And) else self.join_flat
            return table[a * np.int32(self.m.n) + b]
        if isinstance(f, _Top):
            return np.broadcast_to(self.top_v, ())
        if isinstance(f, _Bot):
            return np.broadcast_to(self.bot_v, ())
        raise TypeError(f)

    def designated_mask(self, arr: np.ndarray) -> np.ndarray:
        if self.mask_mode:
            if len(self.m.designated) == 1:
                return arr == self.values[next(iter(self.m.designated))]
            return self.des_lut[arr]
        if len(self.m.designated) == 1:
            return arr == np.int32(next(iter(self.m.designated)))
        return self.des_arr[arr]

    def to_element(self, value) -> int:
        if self.mask_mode:
            return int(self.elem_lut[int(value)])
        return int(value)


def _engine(m: FinMatrix) -> _Engine:
    e = m._cache.get("engine")
    if e is None:
        e = _Engine(m)
        m._cache["engine"] = e
    return e


def _violation(m: FinMatrix, r: RuleInstance) -> Optional[dict[str, int]]:
    """First valuation designating all premises but no conclusion, or None.

    Atoms are swept in sorted order, element 0 first, so the witness is the
    lexicographically least one.
    """
    eng = _engine(m)
    names = sorted(r.atom_names())
    k = len(names)
    n = m.n
    # chunk leading atoms so in-memory grids stay bounded
    lead = 0
    grid = n ** k if k else 1
    while grid > _CHUNK_LIMIT:
        lead += 1
        grid = n ** (k - lead)
    tail = names[lead:]
    shape = tuple(n for _ in tail)

    def run_chunk(fixed: dict[str, np.ndarray]) -> Optional[int]:
        arrays = dict(fixed)
        for i, name in enumerate(tail):
            s = (1,) * i + (n,) + (1,) * (len(tail) - 1 - i)
            arrays[name] = eng.values.reshape(s)
        prem_ok = np.broadcast_to(True, shape)
        for g in sorted(r.premises, key=str):
            prem_ok = prem_ok & eng.designated_mask(eng.eval_formula(g, arrays))
        if not prem_ok.any():
            return None
        bad = prem_ok
        if r.conclusions:
            concl_ok = np.broadcast_to(False, shape)
            for d in sorted(r.conclusions, key=str):
                concl_ok = concl_ok | eng.designated_mask(eng.eval_formula(d, arrays))
            bad = prem_ok & ~concl_ok
        flat = np.broadcast_to(bad, shape).ravel()
        hit = int(np.argmax(flat))
        if not flat[hit]:
            return None
        return hit

    for combo in itertools.product(range(n), repeat=lead):
        fixed = {names[i]: eng.values[combo[i]].reshape(()) for i in range(lead)}
        hit = run_chunk(fixed)
        if hit is not None:
            out = {names[i]: combo[i] for i in range(lead)}
            for i in reversed(range(len(tail))):
                out[tail[i]] = hit % n
                hit //= n
            return out
    return None


def validates(m: FinMatrix, r: RuleInstance) -> bool:
    """True iff every valuation designating all premises designates some
    conclusion (none may exist for explosive rules)."""
    return _violation(m, r) is None


def find_countervaluation(m: FinMatrix, r: RuleInstance) -> Optional[dict[str, int]]:
    """Witness valuation refuting r in m, or None when r is valid."""
    return _violation(m, r)


# -- products and submatrices ----------------------------------------------


def product(ms: Sequence[FinMatrix]) -> FinMatrix:
    """Direct product; designated tuples are the products of designated sets."""
    if not ms:
        raise MatrixError("product of an empty family")
    if len(ms) == 1:
        return ms[0]
    sizes = [m.n for m in ms]
    index = list(itertools.product(*(range(s) for s in sizes)))
    pos = {t: i for i, t in enumerate(index)}
    labels = ["(" + ",".join(m.labels[i] for m, i in zip(ms, t)) + ")" for t in index]
    neg = [pos[tuple(m.neg[i] for m, i in zip(ms, t))] for t in index]
    top = pos[tuple(m.top for m in ms)]
    bottom = pos[tuple(m.bottom for m in ms)]
    designated = [pos[t] for t in index
                  if all(i in m.designated for m, i in zip(ms, t))]
    flags = ["demorgan"] if all("demorgan" in m.flags for m in ms) else []
    encs = [m.enc for m in ms]
    if all(e is not None for e in encs) and sum(m.nbits for m in ms) <= 64:
        shifts = np.cumsum([0] + [m.nbits for m in ms[:-1]])
        enc = [sum(m.enc[i] << int(sh) for m, i, sh in zip(ms, t, shifts)) for t in index]
        if len(index) > TABLE_LIMIT:
            return FinMatrix(labels, neg, top, bottom, designated, flags, enc=enc)
        return FinMatrix(labels, neg, top, bottom, designated, flags, enc=enc,
                         meet=_tuple_table(ms, index, pos, "meet"),
                         join=_tuple_table(ms, index, pos, "join"))
    return FinMatrix(labels, neg, top, bottom, designated, flags,
                     meet=_tuple_table(ms, index, pos, "meet"),
                     join=_tuple_table(ms, index, pos, "join"))


def _tuple_table(ms, index, pos, op):
    out = []
    for t in index:
        row = []
        for u in index:
            row.append(pos[tuple(getattr(m, op)(i, j) for m, i, j in zip(ms, t, u))])
        out.append(row)
    return out


def submatrices(m: FinMatrix) -> Iterator[FinMatrix]:
    """All submatrices: subuniverses containing top and bottom, closed under
    the three operations, with the induced designated sets.

    Enumerated by breadth-first extension of closed sets, largest first is
    not guaranteed; order is deterministic.
    """
    def close(seed: frozenset[int]) -> frozenset[int]:
        cur = set(seed)
        frontier = list(cur)
        while frontier:
            x = frontier.pop()
            for y in list(cur):
                for z in (m.meet(x, y), m.join(x, y)):
                    if z not in cur:
                        cur.add(z)
                        frontier.append(z)
            z = m.neg[x]
            if z not in cur:
                cur.add(z)
                frontier.append(z)
        return frozenset(cur)

    base = close(frozenset([m.top, m.bottom]))
    seen = {base}
    queue = [base]
    while queue:
        s = queue.pop(0)
        yield _induced_submatrix(m, sorted(s))
        for x in range(m.n):
            if x not in s:
                t = close(s | {x})
                if t not in seen:
                    seen.add(t)
                    queue.append(t)


def _induced_submatrix(m: FinMatrix, elems: Sequence[int]) -> FinMatrix:
    pos = {e: i for i, e in enumerate(elems)}
    return FinMatrix(
        [m.labels[e] for e in elems],
        [pos[m.neg[e]] for e in elems],
        pos[m.top], pos[m.bottom],
        [pos[e] for e in elems if e in m.designated],
        m.flags,
        meet=[[pos[m.meet(x, y)] for y in elems] for x in elems],
        join=[[pos[m.join(x, y)] for y in elems] for x in elems],
        validate=False,
    )


# -- congruences -------------------------------------------------------------


def leibniz_congruence(m: FinMatrix) -> Partition:
    """Largest congruence compatible with the designated set.

    Computed as the greatest fixpoint of signature refinement: two elements
    stay together while designation and all one-step contexts (meet/join
    with a fixed argument, negation) agree blockwise.  This reaches the same
    fixpoint as pairwise separation propagation.
    """
    n = m.n
    colours = np.array([1 if i in m.designated else 0 for i in range(n)], dtype=np.int64)
    if n <= TABLE_LIMIT:
        mt, jt = m.meet_table(), m.join_table()
        ng = np.array(m.neg, dtype=np.int32)
        while True:
            sig = np.concatenate(
                [colours[:, None], colours[ng][:, None], colours[mt], colours[jt]],
                axis=1,
            )
            _, new = np.unique(sig, axis=0, return_inverse=True)
            if len(np.unique(new)) == len(np.unique(colours)):
                return Partition.of(colours.tolist())
            colours = new
    # large carriers: same refinement, hashing rows chunk by chunk
    import hashlib
    e = m._enc_np()
    ng = np.array([m.enc[m.neg[i]] for i in range(n)], dtype=np.uint64)
    order = np.argsort(e, kind="stable")
    sorted_enc = e[order]

    def lookup(masks: np.ndarray) -> np.ndarray:
        posn = np.searchsorted(sorted_enc, masks)
        return order[posn]

    neg_idx = lookup(ng)
    while True:
        digests = []
        for start in range(0, n, 256):
            chunk = slice(start, min(start + 256, n))
            meets = lookup((e[chunk, None] & e[None, :]).ravel()).reshape(-1, n)
            joins = lookup((e[chunk, None] | e[None, :]).ravel()).reshape(-1, n)
            block = np.concatenate(
                [colours[chunk][:, None], colours[neg_idx[chunk]][:, None],
                 colours[meets], colours[joins]],
                axis=1,
            )
            for row in block:
                digests.append(hashlib.blake2b(row.tobytes(), digest_size=16).digest())
        uniq = {d: i for i, d in enumerate(dict.fromkeys(digests))}
        new = np.array([uniq[d] for d in digests], dtype=np.int64)
        if len(uniq) == len(np.unique(colours)):
            return Partition.of(colours.tolist())
        colours = new


def quotient_by(m: FinMatrix, part: Partition) -> FinMatrix:
    """Quotient matrix; requires part to be a designation-compatible congruence."""
    if part.is_identity():
        return m
    blocks = part.block_sets()
    reps = [min(b) for b in blocks]
    for b in blocks:
        des = {x in m.designated for x in b}
        if len(des) > 1:
            raise MatrixError("partition not compatible with designation")
    bid = part.blocks
    k = len(reps)
    meet = [[bid[m.meet(reps[i], reps[j])] for j in range(k)] for i in range(k)]
    join = [[bid[m.join(reps[i], reps[j])] for j in range(k)] for i in range(k)]
    neg = [bid[m.neg[reps[i]]] for i in range(k)]
    labels = [m.labels[r] for r in reps]
    designated = [i for i, r in enumerate(reps) if r in m.designated]
    return FinMatrix(labels, neg, bid[m.top], bid[m.bottom], designated, m.flags,
                     meet=meet, join=join)


def leibniz_reduct(m: FinMatrix) -> FinMatrix:
    """Quotient by the Leibniz congruence; the result is reduced."""
    return quotient_by(m, leibniz_congruence(m))


def principal_congruence(m: FinMatrix, a: int, b: int) -> Partition:
    """Smallest congruence identifying a and b, by one-step-context closure."""
    if "demorgan" not in m.flags:
        raise MatrixError("principal congruences are for De Morgan matrices here")
    parent = list(range(m.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = [(a, b)]
    while work:
        x, y = work.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        work.append((m.neg[x], m.neg[y]))
        for c in range(m.n):
            work.append((m.meet(x, c), m.meet(y, c)))
            work.append((m.join(x, c), m.join(y, c)))
    return Partition.of([find(i) for i in range(m.n)])


# -- isomorphism --------------------------------------------------------------


def _joint_colours(m1: FinMatrix, m2: FinMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Iterated structural refinement run jointly on both carriers, so the
    returned colour ids are directly comparable across the two matrices.

    The per-element signature is (colour, colour of the negation, sorted
    multiset of encoded (colour(y), colour(x&y), colour(x|y)) triples), all
    of which any isomorphism preserves.
    """
    def base(m: FinMatrix) -> np.ndarray:
        return np.array(
            [(i in m.designated) * 4 + (i == m.top) * 2 + (i == m.bottom)
             for i in range(m.n)],
            dtype=np.int64,
        )

    data = []
    for m in (m1, m2):
        data.append((m.meet_table(), m.join_table(), np.array(m.neg, dtype=np.int32)))
    c1, c2 = base(m1), base(m2)
    for _ in range(max(m1.n, m2.n)):
        k = int(max(c1.max(initial=0), c2.max(initial=0))) + 1
        rows = []
        for (mt, jt, ng), c in zip(data, (c1, c2)):
            triple = c[None, :] * k * k + c[mt] * k + c[jt]
            rows.append(np.concatenate(
                [c[:, None], c[ng][:, None], np.sort(triple, axis=1)], axis=1))
        if rows[0].shape[1] != rows[1].shape[1]:
            break  # different carrier sizes; colours stop refining jointly
        stacked = np.concatenate(rows, axis=0)
        _, inv = np.unique(stacked, axis=0, return_inverse=True)
        n1 = m1.n
        new1, new2 = inv[:n1], inv[n1:]
        if len(np.unique(inv)) == len(np.unique(np.concatenate([c1, c2]))):
            break
        c1, c2 = new1, new2
    return c1, c2


def find_isomorphism(m1: FinMatrix, m2: FinMatrix) -> Optional[tuple[int, ...]]:
    """A bijection preserving tables, constants and designation, or None.

    Backtracking over elements ordered by colour class rarity; colour
    classes come from iterated structural refinement run jointly on both
    matrices.
    """
    if m1 is m2:
        return tuple(range(m1.n))
    if m1.n != m2.n or len(m1.designated) != len(m2.designated):
        return None
    c1, c2 = _joint_colours(m1, m2)
    if sorted(np.bincount(c1, minlength=1).tolist()) != sorted(np.bincount(c2, minlength=1).tolist()):
        return None
    n = m1.n
    mt1, jt1 = m1.meet_table(), m1.join_table()
    mt2, jt2 = m2.meet_table(), m2.join_table()
    cand = [np.flatnonzero(c2 == c1[x]).tolist() for x in range(n)]
    if any(not c for c in cand):
        return None

    order = sorted(range(n), key=lambda x: (len(cand[x]), x))
    mapping: list[Optional[int]] = [None] * n
    used = [False] * m2.n

    def ok(x: int, y: int) -> bool:
        if (x in m1.designated) != (y in m2.designated):
            return False
        if (x == m1.top) != (y == m2.top) or (x == m1.bottom) != (y == m2.bottom):
            return False
        my = mapping[m1.neg[x]]
        if my is not None and my != m2.neg[y]:
            return False
        for z in order:
            mz = mapping[z]
            if mz is None:
                continue
            if mapping[mt1[x, z]] is not None and mapping[mt1[x, z]] != mt2[y, mz]:
                return False
            if mapping[jt1[x, z]] is not None and mapping[jt1[x, z]] != jt2[y, mz]:
                return False
        return True

    # iterative backtracking (carriers can exceed the recursion limit)
    choice_at: list[Optional[Iterator[int]]] = [None] * n
    i = 0
    while True:
        if i == n:
            return tuple(mapping)  # type: ignore[arg-type]
        x = order[i]
        if choice_at[i] is None:
            choice_at[i] = iter(cand[x])
        advanced = False
        for y in choice_at[i]:
            if used[y] or not ok(x, y):
                continue
            mapping[x] = y
            used[y] = True
            i += 1
            advanced = True
            break
        if advanced:
            continue
        choice_at[i] = None
        if i == 0:
            return None
        i -= 1
        x = order[i]
        used[mapping[x]] = False
        mapping[x] = None


def is_matrix_isomorphism(m1: FinMatrix, m2: FinMatrix, mapping: Sequence[int]) -> bool:
    if sorted(mapping) != list(range(m2.n)) or m1.n != m2.n:
        return False
    if mapping[m1.top] != m2.top or mapping[m1.bottom] != m2.bottom:
        return False
    for x in range(m1.n):
        if (x in m1.designated) != (mapping[x] in m2.designated):
            return False
        if mapping[m1.neg[x]] != m2.neg[mapping[x]]:
            return False
        for y in range(m1.n):
            if mapping[m1.meet(x, y)] != m2.meet(mapping[x], mapping[y]):
                return False
            if mapping[m1.join(x, y)] != m2.join(mapping[x], mapping[y]):
                return False
    return True


@dataclass
class MatrixMap:
    """An element map between matrices, checkable for the hom properties."""

    source: FinMatrix
    target: FinMatrix
    mapping: tuple[int, ...]

    def is_homomorphism(self) -> bool:
        h, s, t = self.mapping, self.source, self.target
        if h[s.top] != t.top or h[s.bottom] != t.bottom:
            return False
        for x in range(s.n):
            if h[s.neg[x]] != t.neg[h[x]]:
                return False
            for y in range(s.n):
                if h[s.meet(x, y)] != t.meet(h[x], h[y]):
                    return False
                if h[s.join(x, y)] != t.join(h[x], h[y]):
                    return False
        return all(h[x] in t.designated for x in s.designated)

    def is_strict(self) -> bool:
        h, s, t = self.mapping, self.source, self.target
        return self.is_homomorphism() and all(
            (x in s.designated) == (h[x] in t.designated) for x in range(s.n)
        )


# -- interval splitting -------------------------------------------------------


def split_at(m: FinMatrix, a: int) -> tuple[FinMatrix, FinMatrix, tuple[int, ...]]:
    """Split along a with a | ~a = top.

    Returns the interval matrices [bottom, a] and [bottom, ~a], whose
    negations are a & ~x and ~a & ~x, and the witness mapping sending x to
    the product element (a & x, ~a & x); the witness is verified to be an
    isomorphism before returning.
    """
    if "demorgan" not in m.flags:
        raise MatrixError("split_at needs a De Morgan matrix")
    na = m.neg[a]
    if m.join(a, na) != m.top:
        raise MatrixError("split_at needs a | ~a = top")

    def interval(c: int) -> tuple[FinMatrix, dict[int, int]]:
        elems = sorted(x for x in range(m.n) if m.leq(x, c))
        pos = {e: i for i, e in enumerate(elems)}
        neg = [pos[m.meet(c, m.neg[x])] for x in elems]
        designated = sorted({pos[m.meet(c, f)] for f in m.designated})
        mm = FinMatrix(
            [m.labels[e] for e in elems], neg, pos[c], pos[m.bottom], designated,
            ["demorgan"],
            meet=[[pos[m.meet(x, y)] for y in elems] for x in elems],
            join=[[pos[m.join(x, y)] for y in elems] for x in elems],
        )
        return mm, pos

    m1, pos1 = interval(a)
    m2, pos2 = interval(na)
    prod = product([m1, m2])
    pair_pos = {}
    for i, t in enumerate(itertools.product(range(m1.n), range(m2.n))):
        pair_pos[t] = i
    witness = tuple(
        pair_pos[(pos1[m.meet(a, x)], pos2[m.meet(na, x)])] for x in range(m.n)
    )
    if not is_matrix_isomorphism(m, prod, witness):
        raise MatrixError("split witness failed verification")
    return m1, m2, witness


# -- free De Morgan algebras --------------------------------------------------


FREE_SIZE_CAP = 50_000


def free_dm_algebra(
    gens: Sequence[str],
    relations: Sequence[tuple[Formula, Formula]] = (),
) -> FinMatrix:
    """Free De Morgan algebra on the generators modulo inequalities lhs <= rhs.

    Realized as the subalgebra of DM4^S generated by the generator
    projections, where S is the set of DM4 valuations of the generators
    satisfying the relations.  (Every De Morgan algebra is a subdirect power
    of the four-element one, so this is the free object.)  The designated
    set is left empty: only the algebra part is meaningful.
    """
    if len(gens) > 3:
        raise MatrixError("free algebra guard: at most 3 generators")
    gen_list = list(gens)

    def ev(f: Formula, v: dict[str, int]) -> int:
        if isinstance(f, Atom):
            return v[f.name]
        if isinstance(f, Neg):
            return DM4_NEG[ev(f.arg, v)]
        if isinstance(f, And):
            return DM4_MEET[ev(f.left, v)][ev(f.right, v)]
        if isinstance(f, Or):
            return DM4_JOIN[ev(f.left, v)][ev(f.right, v)]
        return 3 if isinstance(f, _Top) else 0

    S = []
    for vals in itertools.product(range(4), repeat=len(gen_list)):
        v = dict(zip(gen_list, vals))
        if all(DM4_MEET[ev(l, v)][ev(r, v)] == ev(l, v) for l, r in relations):
            S.append(v)
    if not S:
        raise MatrixError("relations are unsatisfiable over DM4")

    def tup(f) -> tuple[int, ...]:
        return tuple(ev(f, v) for v in S)

    top_t = tuple(3 for _ in S)
    bot_t = tuple(0 for _ in S)
    elems = {bot_t, top_t}
    for g in gen_list:
        elems.add(tup(Atom(g)))
    frontier = list(elems)
    while frontier:
        x = frontier.pop()
        new = [tuple(DM4_NEG[a] for a in x)]
        for y in list(elems):
            new.append(tuple(DM4_MEET[a][b] for a, b in zip(x, y)))
            new.append(tuple(DM4_JOIN[a][b] for a, b in zip(x, y)))
        for t in new:
            if t not in elems:
                if len(elems) >= FREE_SIZE_CAP:
                    raise MatrixError("free algebra closure exceeded the size cap")
                elems.add(t)
                frontier.append(t)
    order = sorted(elems)
    pos = {t: i for i, t in enumerate(order)}
    names = {tup(Atom(g)): g for g in gen_list}
    labels = [names.get(t, "e%d" % i) for i, t in enumerate(order)]
    # DM4 values 0..3 are 2-bit masks (meet/join are bitwise), so a tuple
    # packs into 2 bits per coordinate
    enc = [sum(a << (2 * i) for i, a in enumerate(t)) for t in order]
    return FinMatrix(
        labels,
        [pos[tuple(DM4_NEG[a] for a in t)] for t in order],
        pos[top_t], pos[bot_t], [], ["demorgan"],
        meet=[[pos[tuple(DM4_MEET[a][b] for a, b in zip(x, y))] for y in order] for x in order],
        join=[[pos[tuple(DM4_JOIN[a][b] for a, b in zip(x, y))] for y in order] for x in order],
        enc=enc if len(S) <= 32 else None,
    )


# -- the catalog --------------------------------------------------------------


def _lattice_from_order(labels, hasse, neg_pairs, designated, name_top, name_bot):
    """Build tables from a Hasse diagram given as label pairs (a < b)."""
    pos = {l: i for i, l in enumerate(labels)}
    n = len(labels)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in hasse:
        leq[pos[a]][pos[b]] = True
    for k in range(n):  # transitive closure
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True

    def meet(x, y):
        lows = [z for z in range(n) if leq[z][x] and leq[z][y]]
        cand = [z for z in lows if all(leq[w][z] for w in lows)]
        assert len(cand) == 1, f"not a lattice at meet({x},{y})"
        return cand[0]

    def join(x, y):
        ups = [z for z in range(n) if leq[x][z] and leq[y][z]]
        cand = [z for z in ups if all(leq[z][w] for w in ups)]
        assert len(cand) == 1, f"not a lattice at join({x},{y})"
        return cand[0]

    neg = [None] * n
    for a, b in neg_pairs:
        neg[pos[a]] = pos[b]
        neg[pos[b]] = pos[a]
    return FinMatrix(
        labels, neg, pos[name_top], pos[name_bot],
        [pos[d] for d in designated], ["demorgan"],
        meet=[[meet(x, y) for y in range(n)] for x in range(n)],
        join=[[join(x, y) for y in range(n)] for x in range(n)],
    )


_DM4_LABELS = ("bot", "n", "b", "top")
_DM4_HASSE = (("bot", "n"), ("bot", "b"), ("n", "top"), ("b", "top"))
_DM4_NEGP = (("bot", "top"), ("n", "n"), ("b", "b"))


def _cached(name: str, build: Callable[[], FinMatrix]) -> FinMatrix:
    got = _CATALOG_CACHE.get(name)
    if got is None:
        got = build()
        _CATALOG_CACHE[name] = got
    return got


_CATALOG_CACHE: dict[str, FinMatrix] = {}


def bd4() -> FinMatrix:
    """Four truth values, the top and the 'both' fixpoint designated."""
    return _cached("BD4", lambda: _lattice_from_order(
        _DM4_LABELS, _DM4_HASSE, _DM4_NEGP, ["b", "top"], "top", "bot"))


def etl4() -> FinMatrix:
    """Four truth values, only the top designated."""
    return _cached("ETL4", lambda: _lattice_from_order(
        _DM4_LABELS, _DM4_HASSE, _DM4_NEGP, ["top"], "top", "bot"))


def k3() -> FinMatrix:
    """Three-element chain with the middle fixpoint, top designated."""
    return _cached("K3", lambda: _lattice_from_order(
        ("bot", "n", "top"), (("bot", "n"), ("n", "top")),
        (("bot", "top"), ("n", "n")), ["top"], "top", "bot"))


def lp3() -> FinMatrix:
    """Three-element chain, middle and top designated."""
    return _cached("LP3", lambda: _lattice_from_order(
        ("bot", "n", "top"), (("bot", "n"), ("n", "top")),
        (("bot", "top"), ("n", "n")), ["n", "top"], "top", "bot"))


def cl2() -> FinMatrix:
    """The two-element Boolean matrix."""
    return _cached("CL2", lambda: _lattice_from_order(
        ("bot", "top"), (("bot", "top"),), (("bot", "top"),), ["top"], "top", "bot"))


def kminus8() -> FinMatrix:
    """The eight-element matrix with top designated whose logic sits just
    below the resolution logic; built from its Hasse diagram."""
    labels = ("bot", "x", "c", "a", "d", "e", "b", "top")
    hasse = (("bot", "x"), ("bot", "c"), ("x", "a"), ("x", "d"), ("c", "d"),
             ("a", "e"), ("d", "e"), ("d", "b"), ("e", "top"), ("b", "top"))
    negp = (("bot", "top"), ("x", "e"), ("c", "b"), ("a", "a"), ("d", "d"))
    return _cached("KMINUS8", lambda: _lattice_from_order(
        labels, hasse, negp, ["top"], "top", "bot"))


def dm4_algebra() -> FinMatrix:
    """The four-element De Morgan algebra with everything designated; used
    as a term-function oracle, not as a logic."""
    return _cached("DM4", lambda: _lattice_from_order(
        _DM4_LABELS, _DM4_HASSE, _DM4_NEGP, ["bot", "n", "b", "top"], "top", "bot"))


def catalog() -> dict[str, FinMatrix]:
    """The named matrices used throughout: BD4, K3, LP3, CL2, ETL4, Kminus8."""
    return {
        "BD4": bd4(), "K3": k3(), "LP3": lp3(),
        "CL2": cl2(), "ETL4": etl4(), "KMINUS8": kminus8(),
    }
