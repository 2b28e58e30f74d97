"""Quiver algebras with relations and their finite-dimensional modules.

A presentation is a finite quiver plus F_p-linear relations between parallel
paths.  Modules are vertexwise F_p spaces with arrow matrices; all homological
data (Hom spaces, projective resolutions, Ext groups, Yoneda classes of exact
sequences) is computed by exact linear algebra from `linalg`.

Conventions used throughout:

* vertices are 1-indexed;
* paths compose left to right, so the path (a, b) means "apply a, then b";
* `arrow_maps[k]` is the matrix of the k-th arrow of the quiver, with shape
  dims[target] x dims[source];
* every basis (paths, hom spaces, kernels) is enumerated in a fixed order, so
  identical inputs give identical coordinate choices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import (
    Matrix,
    block_diag,
    column_space_basis,
    enumerate_vectors,
    hstack,
    in_column_space,
    is_invertible,
    is_prime,
    kernel_basis,
    quotient_with_section,
    rank,
    rref,
    rref_solve,
    same_column_space,
    solve_unique,
    vstack,
)

DECOMPOSE_END_ENUM_LIMIT = 6  # End(M) dimension up to which idempotents are enumerated
DECOMPOSE_FITTING_TRIES = 24
DECOMPOSE_FALLBACK_ENUM = 4096


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("quiver needs at least one vertex")
        seen: set[str] = set()
        for a in self.arrows:
            if a.name in seen:
                raise ValueError(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            for v in (a.source, a.target):
                if not (1 <= v <= self.vertex_count):
                    raise ValueError(f"arrow {a.name!r} touches missing vertex {v}")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def arrows_from(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]


Path = tuple[str, ...]  # arrow names, composing left to right; () is a unit path


def path_endpoints(quiver: Quiver, path: Path) -> tuple[int, int]:
    if not path:
        raise ValueError("empty path endpoints depend on context")
    first = quiver.arrow(path[0])
    cur = first.target
    for name in path[1:]:
        a = quiver.arrow(name)
        if a.source != cur:
            raise ValueError(f"path {path} breaks at {name!r}")
        cur = a.target
    return first.source, cur


@dataclass(frozen=True)
class Relation:
    """F_p-linear combination of parallel paths, each of length >= 2."""

    coeffs: tuple[int, ...]
    paths: tuple[Path, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.paths) or not self.paths:
            raise ValueError("relation needs matching nonempty coefficient/path lists")
        if any(len(q) < 2 for q in self.paths):
            raise ValueError("relation paths must have length >= 2")


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: tuple[Relation, ...]
    p: int = 2
    path_length_bound: int = 16

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"coefficient modulus {self.p} is not prime")
        if self.path_length_bound < 1:
            raise ValueError("path length bound must be positive")
        ends: tuple[int, int] | None
        for rel in self.relations:
            ends = None
            for q, c in zip(rel.paths, rel.coeffs):
                e = path_endpoints(self.quiver, q)
                if ends is None:
                    ends = e
                elif e != ends:
                    raise ValueError(f"relation paths are not parallel: {rel.paths}")
                if not (0 <= c < self.p):
                    raise ValueError("relation coefficients must be reduced mod p")


# -- path bases -------------------------------------------------------------


class _SlotBasis:
    """Basis data for e_i . Lambda . e_j: chosen basis paths and a reduction map."""

    def __init__(self, paths_window: list[Path], basis_paths: list[Path],
                 reduce_matrix: Matrix):
        self.paths_window = paths_window          # all paths i->j of length <= bound+1
        self.index = {q: k for k, q in enumerate(paths_window)}
        self.basis_paths = basis_paths            # subset of paths of length <= bound
        self.reduce_matrix = reduce_matrix        # len(basis) x len(window)

    @property
    def dim(self) -> int:
        return len(self.basis_paths)

    def reduce_path(self, q: Path) -> Matrix:
        """Coordinates of a window path in the chosen basis."""
        return self.reduce_matrix.column_at(self.index[q])


class PathBasis:
    """Reduced path bases for every vertex pair of the algebra."""

    def __init__(self, alg: AlgebraPresentation, slots: dict[tuple[int, int], _SlotBasis]):
        self.alg = alg
        self.slots = slots

    def slot(self, i: int, j: int) -> _SlotBasis:
        return self.slots[(i, j)]

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.slots.values())


def _enumerate_paths(quiver: Quiver, start: int, max_len: int) -> list[Path]:
    out: list[Path] = []
    frontier: list[tuple[Path, int]] = [((), start)]
    for _ in range(max_len):
        nxt: list[tuple[Path, int]] = []
        for path, at in frontier:
            for a in sorted(quiver.arrows_from(at), key=lambda a: a.name):
                q = path + (a.name,)
                out.append(q)
                nxt.append((q, a.target))
        frontier = nxt
        if not frontier:
            break
    return out


@lru_cache(maxsize=None)
def path_basis(alg: AlgebraPresentation) -> PathBasis:
    """Choose path bases of the quotient algebra, certifying finiteness.

    All paths of length <= bound+1 are materialised; the relation ideal is
    spanned inside that window.  Construction fails unless every path of
    length bound+1 reduces into the span of shorter paths: that certifies the
    algebra is spanned by paths within the bound (any longer path factors
    through one of these), so the computed dimension is stable under raising
    the bound.
    """
    quiver, p, bound = alg.quiver, alg.p, alg.path_length_bound
    window = bound + 1
    by_slot: dict[tuple[int, int], list[Path]] = {
        (i, j): ([()] if i == j else [])
        for i in range(1, quiver.vertex_count + 1)
        for j in range(1, quiver.vertex_count + 1)
    }
    for i in range(1, quiver.vertex_count + 1):
        for q in _enumerate_paths(quiver, i, window):
            j = path_endpoints(quiver, q)[1]
            by_slot[(i, j)].append(q)
    for key in by_slot:
        by_slot[key].sort(key=lambda q: (len(q), q))

    slots: dict[tuple[int, int], _SlotBasis] = {}
    for (i, j), paths in by_slot.items():
        dim = len(paths)
        index = {q: k for k, q in enumerate(paths)}
        ideal_vectors: list[Matrix] = []
        for rel in alg.relations:
            ri, rj = path_endpoints(quiver, rel.paths[0])
            for u in [q for q in by_slot.get((i, ri), []) if len(q) < window]:
                for v in [q for q in by_slot.get((rj, j), []) if len(q) < window]:
                    padded = [u + q + v for q in rel.paths]
                    if any(len(q) > window for q in padded):
                        continue
                    vec = [0] * dim
                    for c, q in zip(rel.coeffs, padded):
                        vec[index[q]] = (vec[index[q]] + c) % p
                    col = Matrix.column(p, vec)
                    if not col.is_zero:
                        ideal_vectors.append(col)
        proj, _sect = quotient_with_section(p, dim, ideal_vectors)
        short_cols = [k for k, q in enumerate(paths) if len(q) <= bound]
        if short_cols:
            short_images = hstack([proj.column_at(k) for k in short_cols]) if proj.rows else Matrix.zeros(p, 0, len(short_cols))
        else:
            short_images = Matrix.zeros(p, proj.rows, 0)
        if rank(short_images) != proj.rows:
            raise ValueError(
                "algebra not certified finite-dimensional at path length bound "
                f"{bound} (vertex pair {(i, j)})"
            )
        _, pivots = rref(short_images)
        basis_cols = [short_cols[t] for t in pivots]
        basis_paths = [paths[k] for k in basis_cols]
        if basis_cols:
            basis_mat = hstack([proj.column_at(k) for k in basis_cols])
            reduce_matrix = solve_unique(basis_mat, proj)
        else:
            reduce_matrix = Matrix.zeros(p, 0, dim)
        slots[(i, j)] = _SlotBasis(paths, basis_paths, reduce_matrix)
    return PathBasis(alg, slots)


def algebra_dimension(alg: AlgebraPresentation) -> int:
    return path_basis(alg).total_dim


# -- modules ----------------------------------------------------------------


@dataclass(frozen=True)
class Module:
    """Representation of the bound quiver: F_p space at each vertex, matrix per arrow."""

    alg: AlgebraPresentation
    dims: tuple[int, ...]
    arrow_maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        quiver = self.alg.quiver
        if len(self.dims) != quiver.vertex_count:
            raise ValueError("dimension vector length disagrees with vertex count")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        if len(self.arrow_maps) != len(quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for a, m in zip(quiver.arrows, self.arrow_maps):
            if m.p != self.alg.p:
                raise ValueError("arrow matrix modulus disagrees with algebra")
            want = (self.dims[a.target - 1], self.dims[a.source - 1])
            if (m.rows, m.cols) != want:
                raise ValueError(
                    f"arrow {a.name!r} matrix is {m.rows}x{m.cols}, expected {want[0]}x{want[1]}"
                )
        for rel in self.relations_violated():
            raise ValueError(f"arrow maps do not satisfy relation on paths {rel.paths}")

    def relations_violated(self) -> list[Relation]:
        bad = []
        for rel in self.alg.relations:
            i, j = path_endpoints(self.alg.quiver, rel.paths[0])
            acc = Matrix.zeros(self.alg.p, self.dims[j - 1], self.dims[i - 1])
            for c, q in zip(rel.coeffs, rel.paths):
                acc = acc + self.path_action(q).scale(c)
            if not acc.is_zero:
                bad.append(rel)
        return bad

    def arrow_map(self, name: str) -> Matrix:
        for a, m in zip(self.alg.quiver.arrows, self.arrow_maps):
            if a.name == name:
                return m
        raise KeyError(name)

    def path_action(self, q: Path, at: int | None = None) -> Matrix:
        """Matrix of the path's action; `at` names the source vertex of a unit path."""
        if q:
            i, _ = path_endpoints(self.alg.quiver, q)
        elif at is not None:
            i = at
        else:
            raise ValueError("unit path action needs its vertex")
        m = Matrix.identity(self.alg.p, self.dims[i - 1])
        for name in q:
            m = self.arrow_map(name) @ m
        return m

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def vertex_dim(self, v: int) -> int:
        return self.dims[v - 1]


def zero_module(alg: AlgebraPresentation) -> Module:
    n = alg.quiver.vertex_count
    return Module(alg, (0,) * n,
                  tuple(Matrix.zeros(alg.p, 0, 0) for _ in alg.quiver.arrows))


def simple_module(alg: AlgebraPresentation, v: int) -> Module:
    n = alg.quiver.vertex_count
    dims = tuple(1 if i == v - 1 else 0 for i in range(n))
    maps = tuple(
        Matrix.zeros(alg.p, dims[a.target - 1], dims[a.source - 1])
        for a in alg.quiver.arrows
    )
    return Module(alg, dims, maps)


def interval_module(alg: AlgebraPresentation, top: int, socle: int) -> Module:
    """Uniserial module supported on consecutive vertices top..socle.

    Requires a unique arrow v -> v+1 for each step; that arrow acts as the
    identity, everything else as zero.  This is the meaning of the
    composition-series labels like "2/3/4" used in input files.
    """
    if top > socle:
        raise ValueError("top vertex must not exceed socle vertex")
    quiver = alg.quiver
    if socle > quiver.vertex_count:
        raise ValueError("socle vertex out of range")
    step_arrows: dict[str, None] = {}
    for v in range(top, socle):
        cands = [a for a in quiver.arrows if a.source == v and a.target == v + 1]
        if len(cands) != 1:
            raise ValueError(f"no unique arrow {v} -> {v + 1}; interval label is ambiguous")
        step_arrows[cands[0].name] = None
    dims = tuple(1 if top <= v <= socle else 0 for v in range(1, quiver.vertex_count + 1))
    maps = []
    for a in quiver.arrows:
        r, c = dims[a.target - 1], dims[a.source - 1]
        if a.name in step_arrows:
            maps.append(Matrix.identity(alg.p, 1))
        else:
            maps.append(Matrix.zeros(alg.p, r, c))
    return Module(alg, dims, tuple(maps))


def standard_module(alg: AlgebraPresentation, kind: str, v: int) -> Module:
    """Indecomposable projective ('proj') or injective ('inj') at a vertex.

    proj v: basis at vertex j is the reduced paths v -> j, arrows act by
    right multiplication.  inj v: the dual construction, basis at j is the
    reduced paths j -> v with arrows acting as transposed left multiplication.
    """
    pb = path_basis(alg)
    quiver, p = alg.quiver, alg.p
    nv = quiver.vertex_count
    if kind == "proj":
        dims = tuple(pb.slot(v, j).dim for j in range(1, nv + 1))
        maps = []
        for a in quiver.arrows:
            src_slot = pb.slot(v, a.source)
            tgt_slot = pb.slot(v, a.target)
            cols = [
                tgt_slot.reduce_path(q + (a.name,)).col_list(0)
                for q in src_slot.basis_paths
            ]
            if cols:
                maps.append(Matrix.from_rows(
                    p, [[col[r] for col in cols] for r in range(tgt_slot.dim)],
                    cols=len(cols)))
            else:
                maps.append(Matrix.zeros(p, tgt_slot.dim, 0))
        return Module(alg, dims, tuple(maps))
    if kind == "inj":
        dims = tuple(pb.slot(j, v).dim for j in range(1, nv + 1))
        maps = []
        for a in quiver.arrows:
            # left multiplication by a: paths(target -> v) -> paths(source -> v)
            src_slot = pb.slot(a.target, v)
            dst_slot = pb.slot(a.source, v)
            cols = [
                dst_slot.reduce_path((a.name,) + q).col_list(0)
                for q in src_slot.basis_paths
            ]
            if cols:
                left_mult = Matrix.from_rows(
                    p, [[col[r] for col in cols] for r in range(dst_slot.dim)],
                    cols=len(cols))
            else:
                left_mult = Matrix.zeros(p, dst_slot.dim, 0)
            maps.append(left_mult.transpose())
        return Module(alg, dims, tuple(maps))
    raise ValueError(f"unknown standard module kind {kind!r}")


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class ModMorphism:
    source: Module
    target: Module
    maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if self.source.alg != self.target.alg:
            raise ValueError("morphism between modules over different algebras")
        nv = self.source.alg.quiver.vertex_count
        if len(self.maps) != nv:
            raise ValueError("one matrix per vertex required")
        for v in range(1, nv + 1):
            m = self.maps[v - 1]
            want = (self.target.vertex_dim(v), self.source.vertex_dim(v))
            if (m.rows, m.cols) != want:
                raise ValueError(f"vertex {v} matrix is {m.rows}x{m.cols}, expected {want}")
        for a in self.source.alg.quiver.arrows:
            lhs = self.maps[a.target - 1] @ self.source.arrow_map(a.name)
            rhs = self.target.arrow_map(a.name) @ self.maps[a.source - 1]
            if lhs != rhs:
                raise ValueError(f"square at arrow {a.name!r} does not commute")

    def map_at(self, v: int) -> Matrix:
        return self.maps[v - 1]

    def compose(self, other: "ModMorphism") -> "ModMorphism":
        """self after other (other first)."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return ModMorphism(other.source, self.target,
                           tuple(a @ b for a, b in zip(self.maps, other.maps)))

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("sum of morphisms with different ends")
        return ModMorphism(self.source, self.target,
                           tuple(a + b for a, b in zip(self.maps, other.maps)))

    def __neg__(self) -> "ModMorphism":
        return ModMorphism(self.source, self.target, tuple(-m for m in self.maps))

    def scale(self, c: int) -> "ModMorphism":
        return ModMorphism(self.source, self.target, tuple(m.scale(c) for m in self.maps))

    @property
    def is_zero(self) -> bool:
        return all(m.is_zero for m in self.maps)

    @property
    def is_mono(self) -> bool:
        return all(rank(m) == m.cols for m in self.maps)

    @property
    def is_epi(self) -> bool:
        return all(rank(m) == m.rows for m in self.maps)

    @property
    def is_iso(self) -> bool:
        return all(is_invertible(m) for m in self.maps)

    def inverse(self) -> "ModMorphism":
        from .linalg import inverse as mat_inverse
        return ModMorphism(self.target, self.source, tuple(mat_inverse(m) for m in self.maps))


def identity_morphism(m: Module) -> ModMorphism:
    return ModMorphism(m, m, tuple(Matrix.identity(m.alg.p, d) for d in m.dims))


def zero_morphism(src: Module, tgt: Module) -> ModMorphism:
    return ModMorphism(src, tgt, tuple(
        Matrix.zeros(src.alg.p, tgt.dims[i], src.dims[i]) for i in range(len(src.dims))
    ))


# hom coordinates: concatenate row-major vec of each vertex matrix, vertex order


def hom_coords(phi: ModMorphism) -> Matrix:
    vals: list[int] = []
    for m in phi.maps:
        vals.extend(m.entries)
    return Matrix.column(phi.source.alg.p, vals)


def hom_from_coords(src: Module, tgt: Module, coords: Matrix) -> ModMorphism:
    p = src.alg.p
    vals = coords.col_list(0)
    maps = []
    pos = 0
    for v in range(1, len(src.dims) + 1):
        r, c = tgt.vertex_dim(v), src.vertex_dim(v)
        maps.append(Matrix(p, r, c, tuple(vals[pos : pos + r * c])))
        pos += r * c
    if pos != len(vals):
        raise ValueError("coordinate length mismatch")
    return ModMorphism(src, tgt, tuple(maps))


def _hom_constraint_matrix(src: Module, tgt: Module) -> Matrix:
    """Linear conditions on vec(phi) expressing all commuting squares."""
    p = src.alg.p
    nv = len(src.dims)
    offsets = []
    pos = 0
    for v in range(1, nv + 1):
        offsets.append(pos)
        pos += tgt.vertex_dim(v) * src.vertex_dim(v)
    total = pos
    rows: list[list[int]] = []
    for a in src.alg.quiver.arrows:
        sv, tv = a.source, a.target
        ms, mt = src.arrow_map(a.name), tgt.arrow_map(a.name)
        # equation entries: (phi_tv @ ms - mt @ phi_sv)[i, j] = 0
        for i in range(tgt.vertex_dim(tv)):
            for j in range(src.vertex_dim(sv)):
                row = [0] * total
                for k in range(src.vertex_dim(tv)):
                    row[offsets[tv - 1] + i * src.vertex_dim(tv) + k] = ms.at(k, j)
                for l in range(tgt.vertex_dim(sv)):
                    idx = offsets[sv - 1] + l * src.vertex_dim(sv) + j
                    row[idx] = (row[idx] - mt.at(i, l)) % p
                rows.append(row)
    if not rows:
        return Matrix.zeros(p, 0, total)
    return Matrix.from_rows(p, rows, cols=total)


@lru_cache(maxsize=None)
def hom_basis(src: Module, tgt: Module) -> tuple[ModMorphism, ...]:
    """Deterministic basis of Hom(src, tgt)."""
    basis = kernel_basis(_hom_constraint_matrix(src, tgt))
    return tuple(hom_from_coords(src, tgt, v) for v in basis)


def hom_dim(src: Module, tgt: Module) -> int:
    return len(hom_basis(src, tgt))


def enumerate_hom(src: Module, tgt: Module) -> list[ModMorphism]:
    """Every element of Hom(src, tgt), zero first, in coordinate order."""
    basis = hom_basis(src, tgt)
    p = src.alg.p
    out = []
    for v in enumerate_vectors(p, len(basis)):
        phi = zero_morphism(src, tgt)
        for c, b in zip(v.col_list(0), basis):
            if c:
                phi = phi + b.scale(c)
        out.append(phi)
    return out


def morphism_in_coords(phi: ModMorphism, basis: Sequence[ModMorphism]) -> Matrix:
    """Express phi in the given hom basis (raises if it is outside the span)."""
    p = phi.source.alg.p
    if not basis:
        if phi.is_zero:
            return Matrix.zeros(p, 0, 1)
        raise ValueError("nonzero morphism in zero hom space")
    mat = hstack([hom_coords(b) for b in basis])
    return solve_unique(mat, hom_coords(phi))


# -- sums, kernels, images ----------------------------------------------------


def direct_sum(parts: Sequence[Module]) -> tuple[Module, list[ModMorphism], list[ModMorphism]]:
    """Direct sum with its inclusions and projections."""
    if not parts:
        raise ValueError("direct sum of nothing; use zero_module")
    alg = parts[0].alg
    p = alg.p
    nv = alg.quiver.vertex_count
    dims = tuple(sum(m.vertex_dim(v) for m in parts) for v in range(1, nv + 1))
    maps = []
    for k, a in enumerate(alg.quiver.arrows):
        maps.append(block_diag(p, [m.arrow_maps[k] for m in parts]))
    total = Module(alg, dims, tuple(maps))
    incls, projs = [], []
    for idx, m in enumerate(parts):
        inc_maps, prj_maps = [], []
        for v in range(1, nv + 1):
            before = sum(q.vertex_dim(v) for q in parts[:idx])
            after = sum(q.vertex_dim(v) for q in parts[idx + 1 :])
            d = m.vertex_dim(v)
            inc = vstack([
                Matrix.zeros(p, before, d),
                Matrix.identity(p, d),
                Matrix.zeros(p, after, d),
            ])
            inc_maps.append(inc)
            prj_maps.append(inc.transpose())
        incls.append(ModMorphism(m, total, tuple(inc_maps)))
        projs.append(ModMorphism(total, m, tuple(prj_maps)))
    return total, incls, projs


def block_morphism(src_parts: Sequence[Module], tgt_parts: Sequence[Module],
                   blocks: Sequence[Sequence[ModMorphism | None]]) -> ModMorphism:
    """Morphism between direct sums given a grid of components.

    blocks[i][j] maps src_parts[j] -> tgt_parts[i]; None means zero.
    """
    src, _, sprj = direct_sum(src_parts)
    tgt, tinc, _ = direct_sum(tgt_parts)
    total = zero_morphism(src, tgt)
    for i, row in enumerate(blocks):
        for j, blk in enumerate(row):
            if blk is None:
                continue
            if blk.source != src_parts[j] or blk.target != tgt_parts[i]:
                raise ValueError(f"block ({i},{j}) has wrong ends")
            total = total + tinc[i].compose(blk.compose(sprj[j]))
    return total


def kernel_module(phi: ModMorphism) -> tuple[Module, ModMorphism]:
    """Kernel with its inclusion."""
    alg = phi.source.alg
    p = alg.p
    nv = alg.quiver.vertex_count
    kbases = []
    for v in range(1, nv + 1):
        kb = kernel_basis(phi.map_at(v))
        kbases.append(hstack(kb) if kb else Matrix.zeros(p, phi.source.vertex_dim(v), 0))
    dims = tuple(kb.cols for kb in kbases)
    maps = []
    for a in alg.quiver.arrows:
        img = phi.source.arrow_map(a.name) @ kbases[a.source - 1]
        maps.append(solve_unique(kbases[a.target - 1], img))
    ker = Module(alg, dims, tuple(maps))
    incl = ModMorphism(ker, phi.source, tuple(kbases))
    return ker, incl


def image_module(phi: ModMorphism) -> tuple[Module, ModMorphism, ModMorphism]:
    """Image with inclusion into the target and corestriction from the source."""
    alg = phi.source.alg
    p = alg.p
    nv = alg.quiver.vertex_count
    ibases = []
    for v in range(1, nv + 1):
        cb = column_space_basis(phi.map_at(v))
        ibases.append(hstack(cb) if cb else Matrix.zeros(p, phi.target.vertex_dim(v), 0))
    dims = tuple(ib.cols for ib in ibases)
    maps = []
    for a in alg.quiver.arrows:
        img = phi.target.arrow_map(a.name) @ ibases[a.source - 1]
        maps.append(solve_unique(ibases[a.target - 1], img))
    im = Module(alg, dims, tuple(maps))
    incl = ModMorphism(im, phi.target, tuple(ibases))
    corestrict = ModMorphism(phi.source, im,
                             tuple(solve_unique(ib, phi.map_at(v + 1))
                                   for v, ib in enumerate(ibases)))
    return im, incl, corestrict


def cokernel_module(phi: ModMorphism) -> tuple[Module, ModMorphism]:
    """Cokernel with the quotient projection."""
    alg = phi.source.alg
    p = alg.p
    nv = alg.quiver.vertex_count
    projs, sects = [], []
    for v in range(1, nv + 1):
        cols = [phi.map_at(v).column_at(j) for j in range(phi.map_at(v).cols)]
        proj, sect = quotient_with_section(p, phi.target.vertex_dim(v), cols)
        projs.append(proj)
        sects.append(sect)
    dims = tuple(pr.rows for pr in projs)
    maps = []
    for a in alg.quiver.arrows:
        maps.append(projs[a.target - 1] @ phi.target.arrow_map(a.name) @ sects[a.source - 1])
    cok = Module(alg, dims, tuple(maps))
    return cok, ModMorphism(phi.target, cok, tuple(projs))


def radical_inclusion(m: Module) -> tuple[Module, ModMorphism]:
    """rad M = sum of images of all arrow actions, with its inclusion."""
    alg = m.alg
    p = alg.p
    nv = alg.quiver.vertex_count
    rbases = []
    for v in range(1, nv + 1):
        incoming = [m.arrow_map(a.name) for a in alg.quiver.arrows_into(v)]
        stacked = hstack(incoming) if incoming else Matrix.zeros(p, m.vertex_dim(v), 0)
        cb = column_space_basis(stacked)
        rbases.append(hstack(cb) if cb else Matrix.zeros(p, m.vertex_dim(v), 0))
    dims = tuple(rb.cols for rb in rbases)
    maps = []
    for a in alg.quiver.arrows:
        img = m.arrow_map(a.name) @ rbases[a.source - 1]
        # arrow images land in the radical, so this solve is consistent
        maps.append(solve_unique(rbases[a.target - 1], img))
    rad = Module(alg, dims, tuple(maps))
    return rad, ModMorphism(rad, m, tuple(rbases))


def projective_cover(m: Module) -> ModMorphism:
    """Epimorphism from a minimal projective onto m (kernel inside the radical)."""
    alg = m.alg
    p = alg.p
    nv = alg.quiver.vertex_count
    if m.is_zero:
        return zero_morphism(zero_module(alg), m)
    rad, rincl = radical_inclusion(m)
    parts: list[Module] = []
    lifts: list[tuple[int, Matrix]] = []  # (vertex, chosen lift column)
    for v in range(1, nv + 1):
        cols = [rincl.map_at(v).column_at(j) for j in range(rincl.map_at(v).cols)]
        proj, sect = quotient_with_section(p, m.vertex_dim(v), cols)
        for t in range(proj.rows):
            parts.append(standard_module(alg, "proj", v))
            lifts.append((v, sect.column_at(t)))
    cover, incls, _ = direct_sum(parts)
    pb = path_basis(alg)
    maps = []
    for w in range(1, nv + 1):
        cols: list[list[int]] = []
        for v, lift in lifts:
            for q in pb.slot(v, w).basis_paths:
                cols.append((m.path_action(q, at=v) @ lift).col_list(0))
        if cols:
            maps.append(Matrix.from_rows(
                p, [[col[r] for col in cols] for r in range(m.vertex_dim(w))],
                cols=len(cols)))
        else:
            maps.append(Matrix.zeros(p, m.vertex_dim(w), 0))
    phi = ModMorphism(cover, m, tuple(maps))
    if not phi.is_epi:
        raise RuntimeError("projective cover construction failed to be surjective")
    return phi


# -- decomposition -------------------------------------------------------------


def _split_by_idempotent(m: Module, e: ModMorphism) -> list[tuple[Module, ModMorphism, ModMorphism]]:
    """Split m along an idempotent endomorphism into [im e, im (1-e)]."""
    out = []
    for idem in (e, identity_morphism(m) + (-e)):
        im, incl, corestrict = image_module(idem)
        # retraction: the corestriction restricted along incl is the identity
        out.append((im, incl, corestrict))
    return out


def _find_idempotent(m: Module, basis: Sequence[ModMorphism]) -> ModMorphism | None:
    p = m.alg.p
    ident = identity_morphism(m)
    for v in enumerate_vectors(p, len(basis)):
        phi = zero_morphism(m, m)
        for c, b in zip(v.col_list(0), basis):
            if c:
                phi = phi + b.scale(c)
        if phi.is_zero or phi == ident:
            continue
        if phi.compose(phi) == phi:
            return phi
    return None


def _fitting_split(m: Module, rng: random.Random,
                   basis: Sequence[ModMorphism]) -> ModMorphism | None:
    """Try to find an idempotent via stable kernel/image of a random endomorphism."""
    p = m.alg.p
    d = m.total_dim
    for _ in range(DECOMPOSE_FITTING_TRIES):
        phi = zero_morphism(m, m)
        for b in basis:
            c = rng.randrange(p)
            if c:
                phi = phi + b.scale(c)
        power = phi
        for _ in range(max(d.bit_length(), 1)):
            power = power.compose(power)
        rank_total = sum(rank(mm) for mm in power.maps)
        if 0 < rank_total < d:
            # idempotent projecting onto the stable image: solve e on im + ker
            im, incl, core = image_module(power)
            ker, kincl = kernel_module(power)
            maps = []
            ok = True
            for v in range(1, len(m.dims) + 1):
                joint = hstack([incl.map_at(v), kincl.map_at(v)])
                if not is_invertible(joint):
                    ok = False
                    break
                from .linalg import inverse as mat_inverse
                inv = mat_inverse(joint)
                sel = incl.map_at(v) @ Matrix(
                    p, im.vertex_dim(v), joint.cols,
                    tuple(inv.entries[: im.vertex_dim(v) * joint.cols]))
                maps.append(sel)
            if ok:
                return ModMorphism(m, m, tuple(maps))
    return None


_default_seed = 0


def set_default_seed(seed: int) -> None:
    """Fix the seed the randomized decomposition searches use when a call
    does not pass one explicitly (e.g. from the EXANGULATE_SEED env var)."""
    global _default_seed
    _default_seed = int(seed)


def decompose(m: Module, seed: int | None = None) -> list[tuple[Module, ModMorphism, ModMorphism]]:
    """Indecomposable summands with inclusion and projection morphisms.

    End(M) of dimension <= 6 is searched exhaustively for idempotents (so
    indecomposability is certified); larger endomorphism algebras use seeded
    Fitting splitting, falling back to exhaustive search while p^dim stays
    within a fixed budget.  Summands are sorted by decreasing total dimension,
    then dimension vector.
    """
    if m.is_zero:
        return []
    rng = random.Random(_default_seed if seed is None else seed)
    result: list[tuple[Module, ModMorphism, ModMorphism]] = []
    stack: list[tuple[Module, ModMorphism, ModMorphism]] = [
        (m, identity_morphism(m), identity_morphism(m))
    ]
    while stack:
        cur, incl, proj = stack.pop()
        basis = hom_basis(cur, cur)
        d = len(basis)
        e: ModMorphism | None = None
        if d <= DECOMPOSE_END_ENUM_LIMIT:
            e = _find_idempotent(cur, basis)
        else:
            e = _fitting_split(cur, rng, basis)
            if e is None and m.alg.p ** d <= DECOMPOSE_FALLBACK_ENUM:
                e = _find_idempotent(cur, basis)
            elif e is None:
                raise RuntimeError("decomposition failed within search budget")
        if e is None:
            result.append((cur, incl, proj))
            continue
        for part, pincl, pproj in _split_by_idempotent(cur, e):
            if part.is_zero:
                continue
            stack.append((part, incl.compose(pincl), pproj.compose(proj)))
    result.sort(key=lambda t: (-t[0].total_dim, t[0].dims))
    # sanity: the summands reassemble the identity of m
    total = zero_morphism(m, m)
    for part, incl, proj in result:
        ip = incl.compose(proj)
        total = total + ip
    if total != identity_morphism(m):
        raise RuntimeError("decomposition did not reassemble the identity")
    return result


def isomorphism_between(a: Module, b: Module, seed: int | None = None) -> ModMorphism | None:
    """Search for an invertible morphism a -> b; None if there is none."""
    if a.dims != b.dims:
        return None
    if a == b:
        return identity_morphism(a)
    basis = hom_basis(a, b)
    if not basis:
        return identity_morphism(a) if a.is_zero and b.is_zero else None
    p = a.alg.p
    rng = random.Random(_default_seed if seed is None else seed)
    # random combinations first, then exhaustive while the space is small
    for _ in range(32):
        phi = zero_morphism(a, b)
        for bb in basis:
            c = rng.randrange(p)
            if c:
                phi = phi + bb.scale(c)
        if phi.is_iso:
            return phi
    if p ** len(basis) <= DECOMPOSE_FALLBACK_ENUM:
        for v in enumerate_vectors(p, len(basis)):
            phi = zero_morphism(a, b)
            for c, bb in zip(v.col_list(0), basis):
                if c:
                    phi = phi + bb.scale(c)
            if phi.is_iso:
                return phi
        return None
    raise RuntimeError("isomorphism search budget exceeded")


def is_isomorphic(a: Module, b: Module, seed: int | None = None) -> bool:
    """Search for an invertible morphism a -> b."""
    return isomorphism_between(a, b, seed) is not None


# -- resolutions and Ext -------------------------------------------------------


@dataclass
class Resolution:
    """Projective resolution P_len -> ... -> P_0 -> M (diffs[k]: P_k -> P_{k-1})."""

    module: Module
    terms: list[Module]
    diffs: list[ModMorphism]           # index k >= 1
    augmentation: ModMorphism          # P_0 -> M


@lru_cache(maxsize=None)
def resolution(m: Module, length: int) -> Resolution:
    aug = projective_cover(m)
    terms = [aug.source]
    diffs: list[ModMorphism] = [zero_morphism(zero_module(m.alg), zero_module(m.alg))]
    prev_cover = aug
    for _ in range(length):
        ker, kincl = kernel_module(prev_cover)
        cover = projective_cover(ker)
        terms.append(cover.source)
        diffs.append(kincl.compose(cover))
        prev_cover = cover
    return Resolution(m, terms, diffs, aug)


def _precompose_matrix(d: ModMorphism, src_basis: Sequence[ModMorphism],
                       tgt_basis: Sequence[ModMorphism]) -> Matrix:
    """Matrix of phi -> phi . d between hom spaces in the given bases."""
    p = d.source.alg.p
    cols = []
    for phi in src_basis:
        cols.append(morphism_in_coords(phi.compose(d), tgt_basis))
    if not cols:
        return Matrix.zeros(p, len(tgt_basis), 0)
    return hstack(cols)


class ExtSpace:
    """Ext^n(C, A) with chosen coordinates.

    Elements are classes of cocycles P_n -> A for the cached minimal
    resolution of C.  The coordinate choice (and hence every ExtElement's
    coords) is reproducible.
    """

    def __init__(self, alg: AlgebraPresentation, n: int, end_C: Module, end_A: Module):
        if n < 1:
            raise ValueError("Ext degree must be positive")
        self.alg = alg
        self.n = n
        self.end_C = end_C
        self.end_A = end_A
        res = resolution(end_C, n + 1)
        self.res = res
        self.hom_n = hom_basis(res.terms[n], end_A)
        hom_n1 = hom_basis(res.terms[n + 1], end_A)
        hom_n_1 = hom_basis(res.terms[n - 1], end_A) if n >= 1 else ()
        d_next = _precompose_matrix(res.diffs[n + 1], self.hom_n, hom_n1) \
            if self.hom_n or hom_n1 else Matrix.zeros(alg.p, len(hom_n1), len(self.hom_n))
        self._cocycle_basis = kernel_basis(d_next)
        zmat = hstack(self._cocycle_basis) if self._cocycle_basis else Matrix.zeros(
            alg.p, len(self.hom_n), 0)
        self._zmat = zmat
        bd_cols = []
        d_here = _precompose_matrix(res.diffs[n], hom_n_1, self.hom_n)
        for j in range(d_here.cols):
            col = d_here.column_at(j)
            bd_cols.append(solve_unique(zmat, col))
        self._proj, self._sect = quotient_with_section(alg.p, zmat.cols, bd_cols)

    @property
    def dim(self) -> int:
        return self._proj.rows

    def element(self, coords: Sequence[int] | Matrix) -> "ExtElement":
        if isinstance(coords, Matrix):
            col = coords
        else:
            col = Matrix.column(self.alg.p, list(coords))
        if col.rows != self.dim or col.cols != 1:
            raise ValueError(f"coords must be a {self.dim}-vector")
        hom_vec = self._zmat @ (self._sect @ col) if self.dim else Matrix.zeros(
            self.alg.p, len(self.hom_n), 1)
        cocycle = zero_morphism(self.res.terms[self.n], self.end_A)
        for c, b in zip(hom_vec.col_list(0), self.hom_n):
            if c:
                cocycle = cocycle + b.scale(c)
        return ExtElement(self.n, self.end_C, self.end_A, col, cocycle)

    def zero(self) -> "ExtElement":
        return self.element([0] * self.dim)

    def basis(self) -> list["ExtElement"]:
        out = []
        for k in range(self.dim):
            out.append(self.element([1 if i == k else 0 for i in range(self.dim)]))
        return out

    def class_of_cocycle(self, cocycle: ModMorphism) -> "ExtElement":
        if cocycle.source != self.res.terms[self.n] or cocycle.target != self.end_A:
            raise ValueError("cocycle has wrong ends for this Ext space")
        hom_vec = morphism_in_coords(cocycle, self.hom_n)
        z = solve_unique(self._zmat, hom_vec) if self._zmat.cols else Matrix.zeros(
            self.alg.p, 0, 1)
        return self.element(self._proj @ z)

    def all_elements(self) -> list["ExtElement"]:
        return [self.element(v) for v in enumerate_vectors(self.alg.p, self.dim)]


@dataclass(frozen=True)
class ExtElement:
    """Class in Ext^n(end_C, end_A): coordinates plus a representing cocycle."""

    n: int
    end_C: Module
    end_A: Module
    coords: Matrix
    cocycle: ModMorphism

    @property
    def is_zero(self) -> bool:
        return self.coords.is_zero

    def __add__(self, other: "ExtElement") -> "ExtElement":
        if (self.n, self.end_C, self.end_A) != (other.n, other.end_C, other.end_A):
            raise ValueError("sum of extension classes with different ends")
        space = ext_group(self.end_C.alg, self.n, self.end_C, self.end_A)
        return space.element(self.coords + other.coords)

    def __neg__(self) -> "ExtElement":
        space = ext_group(self.end_C.alg, self.n, self.end_C, self.end_A)
        return space.element(-self.coords)


@lru_cache(maxsize=None)
def ext_group(alg: AlgebraPresentation, n: int, end_C: Module, end_A: Module) -> ExtSpace:
    return ExtSpace(alg, n, end_C, end_A)


@lru_cache(maxsize=None)
def _chain_lift(end_Cp: Module, end_C: Module, hom_index: int, n: int) -> tuple[ModMorphism, ...]:
    """Chain map res(end_Cp) -> res(end_C) over the hom basis element."""
    c = hom_basis(end_Cp, end_C)[hom_index]
    res_p = resolution(end_Cp, n + 1)
    res_c = resolution(end_C, n + 1)
    lifts: list[ModMorphism] = []
    # u_0 with aug . u_0 = c . aug'
    target = c.compose(res_p.augmentation)
    u0 = _solve_postcompose(res_c.augmentation, res_p.terms[0], target)
    lifts.append(u0)
    for k in range(1, n + 1):
        rhs = lifts[k - 1].compose(res_p.diffs[k])
        uk = _solve_postcompose(res_c.diffs[k], res_p.terms[k], rhs)
        lifts.append(uk)
    return tuple(lifts)


def _solve_postcompose(f: ModMorphism, src: Module, rhs: ModMorphism) -> ModMorphism:
    """One morphism u: src -> f.source with f . u = rhs."""
    basis = hom_basis(src, f.source)
    p = src.alg.p
    if not basis:
        if rhs.is_zero:
            return zero_morphism(src, f.source)
        raise ValueError("no candidates for lifting problem")
    cols = [hom_coords(f.compose(b)) for b in basis]
    mat = hstack(cols)
    sol = rref_solve(mat, hom_coords(rhs))
    if sol is None:
        raise ValueError("lifting problem has no solution")
    u = zero_morphism(src, f.source)
    for c, b in zip(sol.col_list(0), basis):
        if c:
            u = u + b.scale(c)
    return u


def push_forward(delta: ExtElement, a: ModMorphism) -> ExtElement:
    """a_* delta for a: end_A -> B, computed on cocycles."""
    if a.source != delta.end_A:
        raise ValueError("pushforward morphism must start at the extension's A end")
    space = ext_group(delta.end_C.alg, delta.n, delta.end_C, a.target)
    return space.class_of_cocycle(a.compose(delta.cocycle))


def pull_back(delta: ExtElement, c: ModMorphism) -> ExtElement:
    """c^* delta for c: Cp -> end_C, computed via a comparison chain lift."""
    if c.target != delta.end_C:
        raise ValueError("pullback morphism must end at the extension's C end")
    alg = delta.end_C.alg
    basis = hom_basis(c.source, delta.end_C)
    coords = morphism_in_coords(c, basis)
    space = ext_group(alg, delta.n, c.source, delta.end_A)
    total = space.zero()
    for idx, coeff in enumerate(coords.col_list(0)):
        if not coeff:
            continue
        lift_n = _chain_lift(c.source, delta.end_C, idx, delta.n)[delta.n]
        part = space.class_of_cocycle(delta.cocycle.compose(lift_n))
        total = space.element(total.coords + part.coords.scale(coeff))
    return total


def _is_exact_sequence(mods: Sequence[Module], maps: Sequence[ModMorphism]) -> bool:
    """Exactness of 0 -> mods[0] -> ... -> mods[-1] -> 0 via the given maps."""
    if len(maps) != len(mods) - 1:
        raise ValueError("need one map per consecutive pair")
    for f, g in zip(maps, maps[1:]):
        if not g.compose(f).is_zero:
            return False
    if not maps[0].is_mono or not maps[-1].is_epi:
        return False
    nv = len(mods[0].dims)
    for k in range(1, len(mods) - 1):
        for v in range(1, nv + 1):
            img = maps[k - 1].map_at(v)
            ker = kernel_basis(maps[k].map_at(v))
            kmat = hstack(ker) if ker else Matrix.zeros(img.p, img.rows, 0)
            if not same_column_space(img, kmat):
                return False
    return True


def yoneda_class(mods: Sequence[Module], maps: Sequence[ModMorphism]) -> ExtElement:
    """Class in Ext^n(C, A) of an exact sequence A -> Z_1 -> ... -> Z_n -> C.

    The input lists the n+2 modules and the n+1 maps between them; it must be
    exact as modules (mono at the left end, epi at the right end).  The class
    is computed by lifting the identity of C through a projective resolution.
    """
    n = len(mods) - 2
    if n < 1:
        raise ValueError("sequence too short")
    if not _is_exact_sequence(mods, maps):
        raise ValueError("sequence is not exact as modules")
    end_A, end_C = mods[0], mods[-1]
    alg = end_A.alg
    res = resolution(end_C, n + 1)
    # phi_0: P_0 -> Z_n over the identity of C
    phi = _solve_postcompose(maps[-1], res.terms[0], res.augmentation)
    for k in range(1, n):
        rhs = phi.compose(res.diffs[k])
        phi = _solve_postcompose(maps[n - k], res.terms[k], rhs)
    # final step: maps[0] : A -> Z_1 is mono; phi_n satisfies maps[0] . phi_n = phi_{n-1} d_n
    rhs = phi.compose(res.diffs[n])
    phi_n = _solve_postcompose(maps[0], res.terms[n], rhs)
    space = ext_group(alg, n, end_C, end_A)
    return space.class_of_cocycle(phi_n)
