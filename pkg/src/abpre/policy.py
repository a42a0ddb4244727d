"""Boolean access formulas and their LSSS matrix form.

Grammar (AND binds tighter than OR, parentheses group):

    expr   := term (OR term)*
    term   := factor (AND factor)*
    factor := ATTR | '(' expr ')'

Attribute tokens match ``[A-Za-z0-9_:!.-]+``; AND and OR are reserved.
Multi-valued attributes are written ``name:value`` and negative attributes
``!name`` by convention -- both are ordinary attribute strings here, and
negatives must be issued to keys explicitly.  Wildcards are expressed by
omitting an attribute from the formula.

Compilation uses the standard labeled-vector construction: the root is
labeled (1); an OR node copies its vector to both children; an AND node
with vector v (zero-padded to the current width c) labels its left child
v||1 and its right child (0,...,0,-1) of width c+1.  Leaf vectors, padded
to the final width, become the matrix rows in left-to-right leaf order.

Note: a formula may name the same attribute twice, so the row-to-attribute
map rho need not be injective.  Waters-style security analyses commonly
restrict rho to be injective; callers who care must enforce that
themselves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import PolicySyntaxError
from .groups import Scalar
from .rng import RandomSource

# ---------------------------------------------------------------- AST ----


@dataclass(frozen=True)
class Leaf:
    attribute: str


@dataclass(frozen=True)
class And:
    left: "PolicyAst"
    right: "PolicyAst"


@dataclass(frozen=True)
class Or:
    left: "PolicyAst"
    right: "PolicyAst"


PolicyAst = Union[Leaf, And, Or]


@dataclass(frozen=True)
class AccessMatrix:
    """LSSS matrix with its row-to-attribute map.

    Entries are plain integers; reduce them mod p at the point of use
    (compilation itself is independent of any group).
    """

    rows: tuple[tuple[int, ...], ...]
    rho: tuple[str, ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("access matrix must have at least one row and column")
        if len(self.rho) != len(self.rows):
            raise ValueError("rho must label every row")
        if len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @property
    def attributes(self) -> frozenset:
        return frozenset(self.rho)

    def reduce(self, modulus: int) -> "AccessMatrix":
        """Copy with entries in canonical form mod `modulus`."""
        return AccessMatrix(
            tuple(tuple(e % modulus for e in row) for row in self.rows), self.rho
        )


# ------------------------------------------------------------- parser ----

_TOKEN_RE = re.compile(r"[A-Za-z0-9_:!.\-]+|[()]|\s+")


def _tokenize(text: str):
    tokens = []  # (kind, value, position)
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PolicySyntaxError(pos, {"ATTR", "'('", "')'"})
        lexeme = m.group()
        if not lexeme.isspace():
            if lexeme in ("AND", "OR"):
                tokens.append((lexeme, lexeme, pos))
            elif lexeme in ("(", ")"):
                tokens.append((lexeme, lexeme, pos))
            else:
                tokens.append(("ATTR", lexeme, pos))
        pos = m.end()
    tokens.append(("END", "", len(text)))
    return tokens


def parse_policy(text: str) -> PolicyAst:
    """Parse an access formula; raises PolicySyntaxError with position."""
    tokens = _tokenize(text)
    index = 0

    def peek():
        return tokens[index]

    def take(kind):
        nonlocal index
        tok = tokens[index]
        if tok[0] != kind:
            raise PolicySyntaxError(tok[2], {kind if kind != "ATTR" else "ATTR"})
        index += 1
        return tok

    def factor():
        kind, value, pos = peek()
        if kind == "ATTR":
            take("ATTR")
            return Leaf(value)
        if kind == "(":
            take("(")
            node = expr()
            take(")")
            return node
        raise PolicySyntaxError(pos, {"ATTR", "'('"})

    def term():
        node = factor()
        while peek()[0] == "AND":
            take("AND")
            node = And(node, factor())
        return node

    def expr():
        node = term()
        while peek()[0] == "OR":
            take("OR")
            node = Or(node, term())
        return node

    node = expr()
    kind, _, pos = peek()
    if kind != "END":
        raise PolicySyntaxError(pos, {"AND", "OR", "end of input"})
    return node


def format_policy(ast: PolicyAst) -> str:
    """Render an AST back to formula text (fully parenthesized inside)."""
    if isinstance(ast, Leaf):
        return ast.attribute
    op = "AND" if isinstance(ast, And) else "OR"
    return f"({format_policy(ast.left)} {op} {format_policy(ast.right)})"


# ----------------------------------------------------------- compiler ----


def compile_lsss(ast: PolicyAst) -> AccessMatrix:
    """Compile a formula to its LSSS matrix (monotone span program)."""
    leaves: list[tuple[str, list[int]]] = []
    width = 1

    def walk(node, vector):
        nonlocal width
        if isinstance(node, Leaf):
            leaves.append((node.attribute, vector))
        elif isinstance(node, Or):
            walk(node.left, vector)
            walk(node.right, vector)
        else:  # And
            padded = vector + [0] * (width - len(vector))
            left_vec = padded + [1]
            right_vec = [0] * width + [-1]
            width += 1
            walk(node.left, left_vec)
            walk(node.right, right_vec)

    walk(ast, [1])
    rows = tuple(tuple(vec + [0] * (width - len(vec))) for _, vec in leaves)
    rho = tuple(attr for attr, _ in leaves)
    return AccessMatrix(rows, rho)


def eval_formula(ast: PolicyAst, attrs) -> bool:
    """Brute-force boolean evaluation; the compiler's test oracle."""
    if isinstance(ast, Leaf):
        return ast.attribute in attrs
    if isinstance(ast, And):
        return eval_formula(ast.left, attrs) and eval_formula(ast.right, attrs)
    return eval_formula(ast.left, attrs) or eval_formula(ast.right, attrs)


# ------------------------------------------------- sharing and solving ----


def make_shares(matrix: AccessMatrix, secret: Scalar, rng: RandomSource) -> list[Scalar]:
    """Shares lambda_i = v . M_i with v = (secret, y_2, ..., y_n) random."""
    p = secret.modulus
    v = [secret.value] + [rng.below(p) for _ in range(matrix.n_cols - 1)]
    return [
        Scalar(sum(e * vj for e, vj in zip(row, v)), p) for row in matrix.rows
    ]


def _row_reduce(aug: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """In-place forward elimination; returns (matrix, pivot column per row)."""
    n_rows = len(aug)
    n_cols = len(aug[0]) - 1  # last column is the augment
    pivots = []
    row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(row, n_rows) if aug[r][col] % p), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = int(pow(aug[row][col], -1, p))
        aug[row] = [e * inv % p for e in aug[row]]
        for r in range(n_rows):
            if r != row and aug[r][col] % p:
                factor = aug[r][col]
                aug[r] = [(e - factor * ep) % p for e, ep in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == n_rows:
            break
    return aug, pivots


def rank(vectors, p: int) -> int:
    """Rank of a list of integer vectors over Z_p."""
    if not vectors:
        return 0
    aug = [[e % p for e in vec] + [0] for vec in vectors]
    _, pivots = _row_reduce(aug, p)
    return len(pivots)


def satisfying_rows(
    matrix: AccessMatrix, attrs, p: int
) -> Optional[tuple[list[int], list[Scalar]]]:
    """Row indices I and coefficients omega with sum omega_i * M_i = e1.

    Only rows whose rho attribute is in `attrs` may be used.  Returns None
    when no such combination exists (the set is unauthorized).  The
    solution is deterministic: Gaussian elimination pivots on the first
    nonzero entry and free variables are set to zero; rows whose resulting
    coefficient is zero are dropped.
    """
    usable = [i for i, attr in enumerate(matrix.rho) if attr in attrs]
    if not usable:
        return None
    n = matrix.n_cols
    # solve (M_usable)^T w = e1  over Z_p
    aug = [
        [matrix.rows[i][col] % p for i in usable] + [1 if col == 0 else 0]
        for col in range(n)
    ]
    reduced, pivots = _row_reduce(aug, p)
    # consistency: a zero coefficient row with nonzero augment has no solution
    for r in range(len(pivots), n):
        if reduced[r][-1] % p:
            return None
    w = [0] * len(usable)
    for r, col in enumerate(pivots):
        w[col] = reduced[r][-1]
    out_idx = [usable[c] for c in range(len(usable)) if w[c]]
    out_w = [Scalar(w[c], p) for c in range(len(usable)) if w[c]]
    if not out_idx:
        # e1 solved with all-zero coefficients is impossible; defensive only
        return None
    return out_idx, out_w
