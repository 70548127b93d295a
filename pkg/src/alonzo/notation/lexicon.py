"""Token classes shared by the lexer and the printer."""

from __future__ import annotations

# single-character operator symbols usable as constant names
OP_CHARS = "·⊙∘⊕⊗∗★+-*/"

# constant names that sit at the relation level and may be chained
REL_SYMBOLS = {"<=", "≤"}

# registry relations and their surface spelling
REL_OPS = {
    "=": None, "!=": "neq", "~=": "qeq", "!~=": "nqeq", "<": "lt", ">": "gt",
    ">=": "ge", "in": "in", "notin": "notin", "subseteq": "subseteq",
    "~in": "isdefin",
}

# registry operators written as infix words at the user-infix level
INFIX_OPS = {"union": "union", "inter": "inter", "diff": "setdiff", "∘": "comp"}

# alphanumeric constant names declared infix somewhere in the loaded files
INFIX_WORDS: set = set()

UNICODE_MAP = {
    "λ": "\\", "∀": "forall", "∃": "exists", "ι": "I", "¬": "~", "∧": "/\\",
    "∨": "\\/", "⇒": "=>", "⇔": "<=>", "≠": "!=", "≃": "~=", "≥": ">=",
    "∈": "in", "∉": "notin", "↦": "|->", "→": "->", "×": "*", "ο": "o",
    "⊆": "subseteq", "∪": "union", "∩": "inter",
}

KEYWORDS = {
    "forall", "exists", "I", "if", "then", "else", "in", "notin", "subseteq",
    "union", "inter", "diff", "o", "PROD", "ITERCAT", "T", "F",
}

BIG_OPS = {"PROD": "prod", "ITERCAT": "iter-cat"}


def is_ident_char(c: str) -> bool:
    return c.isalnum() or c in "_'"


def is_symbolic(name: str) -> bool:
    return bool(name) and not any(is_ident_char(c) for c in name)


def is_infix_name(name: str) -> bool:
    return is_symbolic(name) or name in INFIX_WORDS
