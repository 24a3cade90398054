"""
Plain-text formats for structure constants and Gram matrices.

Structure constants: the first line holds n; every further line reads
"i j k v" with 1-based indices, i < j, meaning c_ij^k = v. Unlisted entries
are zero and the antisymmetric partners are implied. Blank lines and lines
starting with '#' are ignored.

Gram matrix: n lines of n whitespace-separated decimals.
"""

from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from app.core.exceptions import InputFormatError
from app.models.lie_algebra import FamilyTag, LieAlgebra
from app.models.metrics import GramMatrix
from app.services.lie_algebra_service import LieAlgebraService

ENTRY_TOL = 0.0


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((lineno, line))
    return lines


def parse_structure_constants(text: str, family_tag: FamilyTag = FamilyTag.CUSTOM) -> LieAlgebra:
    """
    Raises:
        InputFormatError: On malformed lines, bad indices or duplicates
        StructureConstantsError: If the constants fail the Jacobi identity
    """
    lines = _content_lines(text)
    if not lines:
        raise InputFormatError("structure constants file is empty")
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError as exc:
        raise InputFormatError(f"line {lineno}: expected the dimension, got {head!r}") from exc
    if n < 2:
        raise InputFormatError(f"line {lineno}: dimension must be at least 2, got {n}")

    brackets: Dict[Tuple[int, int], Dict[int, float]] = {}
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 4:
            raise InputFormatError(f"line {lineno}: expected 'i j k v', got {line!r}")
        try:
            i, j, k = (int(p) for p in parts[:3])
            v = float(parts[3])
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: cannot parse {line!r}") from exc
        if not (1 <= i < j <= n) or not 1 <= k <= n:
            raise InputFormatError(f"line {lineno}: indices must satisfy 1 <= i < j <= {n}, 1 <= k <= {n}")
        if not np.isfinite(v):
            raise InputFormatError(f"line {lineno}: value must be finite")
        row = brackets.setdefault((i - 1, j - 1), {})
        if k - 1 in row:
            raise InputFormatError(f"line {lineno}: duplicate entry for c_{i}{j}^{k}")
        row[k - 1] = v
    return LieAlgebraService.from_brackets(n, brackets, family_tag)


def format_structure_constants(g: LieAlgebra) -> str:
    out = [str(g.dim)]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            for k in range(g.dim):
                v = g.c[i, j, k]
                if abs(v) > ENTRY_TOL:
                    out.append(f"{i + 1} {j + 1} {k + 1} {float(v)!r}")
    return "\n".join(out) + "\n"


def parse_gram_matrix(text: str) -> GramMatrix:
    """
    Raises:
        InputFormatError: On ragged or non-numeric rows
        DefinitenessError: If the matrix is not symmetric positive-definite
    """
    rows = []
    for lineno, line in _content_lines(text):
        try:
            rows.append([float(p) for p in line.split()])
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: cannot parse {line!r}") from exc
    if not rows:
        raise InputFormatError("Gram matrix file is empty")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputFormatError(f"Gram matrix must be {n}x{n}")
    return GramMatrix(np.array(rows))


def format_matrix(M: np.ndarray, precision: int = 17) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return "\n".join(" ".join(f"{v:.{precision}g}" for v in row) for row in M) + "\n"


def _read(path: Path) -> str:
    try:
        return Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise InputFormatError(f"{path}: not a text file") from exc


def read_structure_constants(path: Path, family_tag: FamilyTag = FamilyTag.CUSTOM) -> LieAlgebra:
    return parse_structure_constants(_read(path), family_tag)


def write_structure_constants(g: LieAlgebra, path: Path) -> None:
    Path(path).write_text(format_structure_constants(g))


def read_gram_matrix(path: Path) -> GramMatrix:
    return parse_gram_matrix(_read(path))


def write_gram_matrix(G: GramMatrix, path: Path) -> None:
    Path(path).write_text(format_matrix(G.G))
