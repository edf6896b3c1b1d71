"""Group words: products of generator powers.

A word is a tuple of ``(name, exponent)`` terms; the empty tuple is the
identity.  Besides the plain ``a*b^-1`` syntax of ``.grp`` files,
:func:`parse_expression` accepts parentheses and commutator brackets,
e.g. ``(a*d)^4`` or ``[a, b]``, and expands them into a plain word.
"""

import re

from .errors import MalformedWord

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
MAX_EXPANDED_TERMS = 100_000

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(\d+)|(.))")


def reduce_word(terms):
    """Merge adjacent powers of the same generator and drop zero exponents."""
    out = []
    for name, exp in terms:
        if out and out[-1][0] == name:
            exp += out.pop()[1]
        if exp:
            out.append((name, exp))
    return tuple(out)


def invert_word(word):
    return tuple((name, -exp) for name, exp in reversed(word))


def letters(word):
    """Expand to unit-exponent letters ``(name, +-1)``."""
    for name, exp in word:
        step = 1 if exp > 0 else -1
        for _ in range(abs(exp)):
            yield name, step


def format_word(word):
    if not word:
        return "1"
    return "*".join(name if exp == 1 else f"{name}^{exp}" for name, exp in word)


def word_length(word):
    return sum(abs(e) for _, e in word)


class _ExprParser:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.end() == pos:
                break
            if m.group(0).strip():
                kind = "name" if m.group(1) else "int" if m.group(2) else m.group(3)
                self.tokens.append((kind, m.group(0).strip(), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def error(self, msg):
        at = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise MalformedWord(f"{msg} at offset {at} in {self.text!r}")

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind):
        if self.peek() != kind:
            self.error(f"expected {kind!r}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok[1]

    def parse(self):
        if not self.tokens:
            self.error("empty word")
        word = self.expr()
        if self.peek() is not None:
            self.error("unexpected token")
        return word

    def expr(self):
        word = list(self.factor())
        while self.peek() == "*":
            self.i += 1
            word.extend(self.factor())
            self._check(word)
        return reduce_word(word)

    def factor(self):
        base = self.atom()
        if self.peek() != "^":
            return base
        self.i += 1
        sign = 1
        if self.peek() == "-":
            self.i += 1
            sign = -1
        exp = sign * int(self.take("int"))
        if len(base) == 1:
            return ((base[0][0], base[0][1] * exp),)
        if exp < 0:
            base, exp = invert_word(base), -exp
        if len(base) * exp > MAX_EXPANDED_TERMS:
            self.error("expanded word too long")
        return base * exp

    def atom(self):
        kind = self.peek()
        if kind == "name":
            return ((self.take("name"), 1),)
        if kind == "int":
            if self.take("int") != "1":
                self.error("only '1' may appear as a numeric factor")
            return ()
        if kind == "(":
            self.i += 1
            word = self.expr()
            self.take(")")
            return word
        if kind == "[":
            self.i += 1
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            return reduce_word(invert_word(a) + invert_word(b) + a + b)
        self.error("expected a generator, '1', '(' or '['")

    def _check(self, word):
        if len(word) > MAX_EXPANDED_TERMS:
            self.error("expanded word too long")


def parse_expression(text):
    """Parse a word expression into a reduced word."""
    return _ExprParser(text).parse()


def as_word(word):
    """Accept a string expression or an already-built word."""
    if isinstance(word, str):
        return parse_expression(word)
    try:
        terms = tuple((str(n), int(e)) for n, e in word)
    except (TypeError, ValueError):
        raise MalformedWord(f"not a word: {word!r}") from None
    for name, _ in terms:
        if not NAME_RE.match(name):
            raise MalformedWord(f"bad generator name {name!r}")
    return reduce_word(terms)
