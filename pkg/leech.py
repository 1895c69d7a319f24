"""Leech lattice in the nu-basis: named vectors, membership and the short shells."""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form
from tqdm import tqdm

import mog

logger = logging.getLogger(__name__)

SHELL_CACHE_VERSION = 1
MINIMAL_COUNT = 196560
SHELL6_COUNT = 16773120
NU_INFINITY = mog.INFINITY_INDEX[mog.INF]


class NotInLatticeError(ValueError):
    def __init__(self, coords) -> None:
        self.coords = tuple(int(c) for c in coords)
        super().__init__(f"Vector is not in the Leech lattice: {list(self.coords)}")


class ShellCacheError(Exception):
    def __init__(self, path: Path, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Unusable shell cache {path}: {reason}")


@dataclass(frozen=True)
class LeechVector:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != 24:
            raise ValueError(f"Leech vectors have 24 coordinates, got {len(self.coords)}")

    @classmethod
    def of(cls, values) -> LeechVector:
        return cls(tuple(int(v) for v in values))

    @property
    def norm(self) -> Fraction:
        return inner(self, self)

    def __add__(self, other: LeechVector) -> LeechVector:
        return LeechVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: LeechVector) -> LeechVector:
        return LeechVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> LeechVector:
        return LeechVector(tuple(-a for a in self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)


ZERO = LeechVector((0,) * 24)


def inner(u: LeechVector, v: LeechVector) -> Fraction:
    return Fraction(-sum(a * b for a, b in zip(u.coords, v.coords)), 8)


def _codeword_mask(flags) -> int:
    return mog.mask_of(i for i, f in enumerate(flags) if f)


def contains(coords, system: mog.SteinerSystem | None = None) -> bool:
    """Golay congruences: all coordinates share a parity m, the positions carrying
    2 (m even) or 3 (m odd) mod 4 form a codeword, and the sum is 4m mod 8."""
    system = system or mog.steiner_system()
    values = [int(c) for c in coords]
    if len(values) != 24:
        return False
    m = values[0] % 2
    if any(v % 2 != m for v in values):
        return False
    residue = 2 if m == 0 else 3
    if _codeword_mask(v % 4 == residue for v in values) not in system.codewords:
        return False
    return sum(values) % 8 == 4 * m


def _vector_on(mask: int, value: int = 2) -> LeechVector:
    return LeechVector(tuple(value if mask >> i & 1 else 0 for i in range(24)))


def _point_vector(index: int, centre: int) -> LeechVector:
    return LeechVector(tuple(centre if i == index else 1 for i in range(24)))


def named_vector(tag: str, payload=None, system: mog.SteinerSystem | None = None) -> LeechVector:
    """Dictionary of named vectors.

    ``empty`` is zero; ``P`` has -3 at P and 1 elsewhere; ``Phat`` has 5 at P and 1
    elsewhere; ``L`` has 2 on the line plus the three Romans; ``Q`` has 2 on the oval
    plus the two Romans completing it to an octad.
    """
    system = system or mog.steiner_system()
    if tag in ("empty", "∅"):
        vec = ZERO
    elif tag == "P":
        vec = _point_vector(mog.parse_position(payload), -3)
    elif tag in ("Phat", "P̂"):
        vec = _point_vector(mog.parse_position(payload), 5)
    elif tag == "L":
        vec = _vector_on(mog.parse_line_or_total(payload).mask | mog.ROMANS_MASK)
    elif tag == "Q":
        points = mog.Q0_MASK if payload in ("Q0", "Q_0") else oval_mask(payload)
        vec = _vector_on(system.oval(points).octad)
    else:
        raise ValueError(f"Unknown vector tag: {tag!r}. Available: empty, P, Phat, L, Q")
    if not contains(vec.coords, system):
        raise NotInLatticeError(vec.coords)
    return vec


def oval_mask(labels) -> int:
    return mog.mask_of(mog.parse_position(p) for p in labels)


def generators(system: mog.SteinerSystem | None = None) -> np.ndarray:
    """nu_Omega - 4 nu_inf followed by 2 nu_K for every octad K, one per row."""
    system = system or mog.steiner_system()
    rows = [np.array(named_vector("P", "inf_inf", system).coords, dtype=np.int64)]
    for octad in system.octads:
        rows.append(np.array(_vector_on(octad).coords, dtype=np.int64))
    return np.vstack(rows)


@lru_cache(maxsize=1)
def lattice_basis() -> np.ndarray:
    """Rows form a Z-basis, read off the Hermite normal form of the generators."""
    gens = generators()
    hnf = hermite_normal_form(Matrix(gens.T.tolist()), D=8**12)
    basis = np.array(hnf.T.tolist(), dtype=np.int64)
    if basis.shape != (24, 24):
        raise RuntimeError(f"Unexpected Hermite form shape {basis.shape}")
    return basis


def basis_gram(basis: np.ndarray | None = None) -> Matrix:
    basis = lattice_basis() if basis is None else basis
    raw = Matrix((basis @ basis.T).tolist())
    return raw.applyfunc(lambda x: -x / 8)


@lru_cache(maxsize=1)
def _inverse_gram() -> np.ndarray:
    inverse = basis_gram().inv()
    return np.array([[int(x) for x in row] for row in inverse.tolist()], dtype=object)


def basis_coefficients(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve v = c @ basis for each row v; returns (integral flags, coefficients).

    With G = -B B^T / 8 unimodular, c = G^-1 (-B v / 8) and c is integral exactly when
    B v is divisible by 8.
    """
    basis = lattice_basis()
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    products = vectors @ basis.T
    ok = np.all(products % 8 == 0, axis=1)
    scaled = (-(products // 8)).astype(object)
    coeffs = scaled @ _inverse_gram().T
    return ok, coeffs


# --- shells ---------------------------------------------------------------------


def _codeword_matrix(words) -> np.ndarray:
    words = sorted(words)
    return np.array([[w >> i & 1 for i in range(24)] for w in words], dtype=bool)


def _even_sign_patterns(n: int) -> np.ndarray:
    patterns = [
        [(-1 if k >> j & 1 else 1) for j in range(n)]
        for k in range(1 << n)
        if bin(k).count("1") % 2 == 0
    ]
    return np.array(patterns, dtype=np.int8)


def enumerate_minimal(system: mog.SteinerSystem | None = None) -> np.ndarray:
    """All norm -4 vectors as an int8 array of shape (196560, 24)."""
    system = system or mog.steiner_system()
    blocks = [_octad_family(system), _odd_family(system), _four_four_family()]
    shell = np.vstack(blocks)
    logger.info(
        "Minimal shell: %d vectors (%s)", len(shell), " + ".join(str(len(b)) for b in blocks)
    )
    return shell


def _octad_family(system: mog.SteinerSystem) -> np.ndarray:
    signs = 2 * _even_sign_patterns(8)
    out = np.zeros((len(system.octads), len(signs), 24), dtype=np.int8)
    for k, octad in enumerate(system.octads):
        out[k][:, mog.bits(octad)] = signs
    return out.reshape(-1, 24)


def _odd_family(system: mog.SteinerSystem) -> np.ndarray:
    words = _codeword_matrix(system.codewords)
    base = np.where(words, -1, 1).astype(np.int8)
    blocks = []
    for i in range(24):
        block = base.copy()
        block[:, i] = np.where(words[:, i], 3, -3)
        blocks.append(block)
    return np.vstack(blocks)


def _four_four_family() -> np.ndarray:
    rows = []
    for i, j in combinations(range(24), 2):
        for si in (4, -4):
            for sj in (4, -4):
                row = np.zeros(24, dtype=np.int8)
                row[i], row[j] = si, sj
                rows.append(row)
    return np.array(rows, dtype=np.int8)


def iter_shell6(
    system: mog.SteinerSystem | None = None, progress: bool = False
) -> Iterator[np.ndarray]:
    """Stream the norm -6 vectors (16,773,120 in all) in int8 chunks."""
    system = system or mog.steiner_system()
    words = _codeword_matrix(system.codewords)
    odd_base = np.where(words, -1, 1).astype(np.int8)
    dodecads = [w for w in sorted(system.codewords) if w.bit_count() == 12]
    triples = list(combinations(range(24), 3))
    steps = len(dodecads) + len(triples) + 24 + len(system.octads)

    with tqdm(total=steps, desc="Norm -6 shell", unit="blk", disable=not progress) as pbar:
        signs12 = 2 * _even_sign_patterns(12)
        for dodecad in dodecads:
            chunk = np.zeros((len(signs12), 24), dtype=np.int8)
            chunk[:, mog.bits(dodecad)] = signs12
            pbar.update(1)
            yield chunk

        for triple in triples:
            chunk = odd_base.copy()
            for t in triple:
                chunk[:, t] = np.where(words[:, t], 3, -3)
            pbar.update(1)
            yield chunk

        for i in range(24):
            chunk = odd_base.copy()
            chunk[:, i] = np.where(words[:, i], -5, 5)
            pbar.update(1)
            yield chunk

        # the eight 2s carry an odd number of minus signs next to +-4
        odd8 = 2 * _even_sign_patterns(8)
        odd8[:, 0] *= -1
        for octad in system.octads:
            inside = mog.bits(octad)
            outside = [i for i in range(24) if not octad >> i & 1]
            blocks = []
            for pos in outside:
                for four in (4, -4):
                    chunk = np.zeros((len(odd8), 24), dtype=np.int8)
                    chunk[:, inside] = odd8
                    chunk[:, pos] = four
                    blocks.append(chunk)
            pbar.update(1)
            yield np.vstack(blocks)


def _checksum(shell: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(shell).tobytes()).hexdigest()


def _read_cache(path: Path) -> np.ndarray:
    try:
        with np.load(path, allow_pickle=False) as data:
            version = int(data["version"])
            checksum = str(data["checksum"])
            shell = data["shell"]
    except (OSError, KeyError, ValueError) as e:
        raise ShellCacheError(path, str(e)) from e
    if version != SHELL_CACHE_VERSION:
        raise ShellCacheError(path, f"version {version}, expected {SHELL_CACHE_VERSION}")
    if shell.shape != (MINIMAL_COUNT, 24):
        raise ShellCacheError(path, f"shape {shell.shape}")
    if _checksum(shell) != checksum:
        raise ShellCacheError(path, "checksum mismatch")
    return shell


def write_cache(path: Path, shell: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        np.savez_compressed(
            f, version=SHELL_CACHE_VERSION, checksum=_checksum(shell), shell=shell
        )


def minimal_shell(cache: Path | None = None) -> np.ndarray:
    """The minimal shell, read from a versioned cache when one is available."""
    if cache is not None and cache.exists():
        try:
            shell = _read_cache(cache)
            logger.info("Loaded minimal shell from %s", cache)
            return shell
        except ShellCacheError as e:
            logger.warning("%s; rebuilding", e)
    shell = _shared_minimal()
    if cache is not None:
        write_cache(cache, shell)
        logger.info("Wrote minimal shell cache %s", cache)
    return shell


@lru_cache(maxsize=1)
def _shared_minimal() -> np.ndarray:
    shell = enumerate_minimal()
    shell.setflags(write=False)
    return shell
