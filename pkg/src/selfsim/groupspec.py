"""Group definition files (``.grp``), kneading-automaton checks and cycle
diagrams.

Grammar (whitespace-insensitive, ``#`` starts a comment)::

    file      = "alphabet" INT  { "gen" NAME "=" perm [ sections ] }
    perm      = "e" | cycle { cycle }
    cycle     = "(" INT INT { INT } ")"
    sections  = "(" word { "," word } ")"      exactly d words
    word      = "1" | term { "*" term }
    term      = NAME [ "^" [ "-" ] INT ]

Example, the Basilica group::

    alphabet 2
    gen a = (0 1) (b, 1)
    gen b = e (a, 1)
"""

import re
from dataclasses import dataclass, field

import networkx as nx

from .errors import ArityError, DuplicateGenerator, GrpSyntaxError, UnknownName
from .words import format_word, reduce_word


@dataclass(frozen=True)
class Generator:
    name: str
    perm: tuple
    sections: tuple  # one word per source letter

    @property
    def is_trivial_on_level_one(self):
        return self.perm == tuple(range(len(self.perm)))


@dataclass(frozen=True)
class GroupSpec:
    d: int
    generators: tuple

    def __post_init__(self):
        if self.d < 2:
            raise ArityError(f"alphabet size must be at least 2, got {self.d}")
        seen = set()
        for g in self.generators:
            if g.name in seen:
                raise DuplicateGenerator(f"generator {g.name!r} declared twice")
            seen.add(g.name)
        for g in self.generators:
            if tuple(sorted(g.perm)) != tuple(range(self.d)):
                raise ArityError(f"generator {g.name!r}: {g.perm!r} is not a permutation of 0..{self.d - 1}")
            if len(g.sections) != self.d:
                raise ArityError(f"generator {g.name!r}: expected {self.d} sections, got {len(g.sections)}")
            for w in g.sections:
                for name, _ in w:
                    if name not in seen:
                        raise UnknownName(f"generator {g.name!r} refers to undeclared {name!r}")

    @property
    def names(self):
        return tuple(g.name for g in self.generators)

    def __getitem__(self, name):
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def __str__(self):
        return print_spec(self)


def make_spec(d, table):
    """Convenience constructor from ``{name: (cycles, section words)}``.

    ``cycles`` is a list of letter tuples (``[]`` for the identity);
    section words are strings in ``.grp`` word syntax, or ``None`` for all
    trivial sections.
    """
    gens = []
    for name, (cyc, secs) in table.items():
        perm = _perm_from_cycles(cyc, d)
        if secs is None:
            secs = ["1"] * d
        words = tuple(_parse_plain_word(s) for s in secs)
        gens.append(Generator(name, perm, words))
    return GroupSpec(d, tuple(gens))


# -- lexer / parser --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<int>\d+)|(?P<punct>[()=,*^-])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GrpSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            nl = m.group().count("\n")
            if nl:
                line += nl
                line_start = m.start() + m.group().rindex("\n") + 1
        elif kind != "comment":
            toks.append(_Tok("punct" if kind == "punct" else kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, msg, tok=None, exc=GrpSyntaxError):
        tok = tok or self.tok
        raise exc(msg, tok.line, tok.col)

    def expect(self, kind, text=None):
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            got = repr(tok.text) if tok.kind != "eof" else "end of file"
            self.fail(f"expected {want}, got {got}")
        self.i += 1
        return tok

    def at(self, text):
        return self.tok.kind in ("punct", "name") and self.tok.text == text

    def parse(self):
        self.expect("name", "alphabet")
        d_tok = self.expect("int")
        d = int(d_tok.text)
        if d < 2:
            self.fail("alphabet size must be at least 2", d_tok, ArityError)
        gens = []
        seen = {}
        refs = []
        while self.tok.kind != "eof":
            self.expect("name", "gen")
            name_tok = self.expect("name")
            name = name_tok.text
            if name in seen:
                self.fail(f"generator {name!r} already declared", name_tok, DuplicateGenerator)
            seen[name] = name_tok
            self.expect("punct", "=")
            perm = self.parse_perm(d)
            if self.at("(") and not self.looks_like_cycle():
                sections = self.parse_sections(d, refs)
            else:
                sections = ((),) * d
            gens.append(Generator(name, perm, sections))
        for ref_name, tok in refs:
            if ref_name not in seen:
                self.fail(f"undeclared generator {ref_name!r}", tok, UnknownName)
        return GroupSpec(d, tuple(gens))

    def looks_like_cycle(self):
        j = self.i + 1
        while self.toks[j].kind == "int":
            j += 1
        return self.toks[j].kind == "punct" and self.toks[j].text == ")" and j > self.i + 1

    def parse_perm(self, d):
        if self.at("e"):
            self.i += 1
            return tuple(range(d))
        if not self.at("("):
            self.fail("expected 'e' or a cycle")
        images = list(range(d))
        used = set()
        while self.at("(") and self.looks_like_cycle():
            open_tok = self.expect("punct", "(")
            cyc = []
            while self.tok.kind == "int":
                t = self.expect("int")
                x = int(t.text)
                if x >= d:
                    self.fail(f"letter {x} is outside the alphabet 0..{d - 1}", t, ArityError)
                if x in used:
                    self.fail(f"letter {x} appears twice in the permutation", t)
                used.add(x)
                cyc.append(x)
            self.expect("punct", ")")
            if len(cyc) < 2:
                self.fail("a cycle needs at least two letters", open_tok)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        if not used:
            self.fail("expected 'e' or a cycle")
        return tuple(images)

    def parse_sections(self, d, refs):
        open_tok = self.expect("punct", "(")
        words = [self.parse_word(refs)]
        while self.at(","):
            self.i += 1
            words.append(self.parse_word(refs))
        self.expect("punct", ")")
        if len(words) != d:
            self.fail(f"expected {d} sections, got {len(words)}", open_tok, ArityError)
        return tuple(words)

    def parse_word(self, refs):
        if self.tok.kind == "int":
            t = self.expect("int")
            if t.text != "1":
                self.fail("only '1' may denote a trivial section", t)
            return ()
        terms = [self.parse_term(refs)]
        while self.at("*"):
            self.i += 1
            terms.append(self.parse_term(refs))
        return reduce_word(terms)

    def parse_term(self, refs):
        t = self.expect("name")
        refs.append((t.text, t))
        exp = 1
        if self.at("^"):
            self.i += 1
            sign = 1
            if self.at("-"):
                self.i += 1
                sign = -1
            exp = sign * int(self.expect("int").text)
        return t.text, exp


def parse_spec(text):
    """Parse ``.grp`` source (``str`` or ``bytes``) into a :class:`GroupSpec`."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GrpSyntaxError(f"file is not UTF-8: {exc}") from None
    return _Parser(text).parse()


def load_spec(path):
    with open(path, "rb") as fh:
        return parse_spec(fh.read())


def _parse_plain_word(text):
    p = _Parser(text)
    refs = []
    word = p.parse_word(refs)
    p.expect("eof")
    return word


def _perm_from_cycles(cycle_list, d):
    images = list(range(d))
    for cyc in cycle_list:
        for a, b in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
            images[a] = b
    return tuple(images)


def perm_cycles(perm, include_fixed=False):
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        if len(cyc) > 1 or include_fixed:
            out.append(tuple(cyc))
    return out


def format_perm(perm):
    cs = perm_cycles(perm)
    if not cs:
        return "e"
    return " ".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def print_spec(spec):
    """Canonical ``.grp`` text; ``parse_spec(print_spec(s)) == s``."""
    lines = [f"alphabet {spec.d}"]
    for g in spec.generators:
        line = f"gen {g.name} = {format_perm(g.perm)}"
        if any(g.sections):
            line += " (" + ", ".join(format_word(w) for w in g.sections) + ")"
        lines.append(line)
    return "\n".join(lines) + "\n"


# -- cycle diagrams ----------------------------------------------------------------

@dataclass(frozen=True)
class CycleDiagram:
    d: int
    faces: tuple  # (generator name, cycle tuple) with len(cycle) >= 2

    @property
    def vertices(self):
        return tuple(range(self.d))


def cycle_diagram(spec):
    """One polygon per cycle of length >= 2 of each root permutation.

    Identical cycles of different generators are kept (multiset semantics).
    """
    faces = []
    for g in spec.generators:
        for cyc in perm_cycles(g.perm):
            faces.append((g.name, cyc))
    return CycleDiagram(spec.d, tuple(faces))


def _incidence_graph(diag):
    graph = nx.Graph()
    graph.add_nodes_from(("x", x) for x in diag.vertices)
    for k, (_, cyc) in enumerate(diag.faces):
        graph.add_node(("f", k))
        graph.add_edges_from((("f", k), ("x", x)) for x in cyc)
    return graph


def _euler_test(diag):
    # 0-cells: letters; 1-cells: polygon sides; 2-cells: polygons.
    parent = list(range(diag.d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = 0
    for _, cyc in diag.faces:
        edges += len(cyc)
        for a in cyc[1:]:
            parent[find(a)] = find(cyc[0])
    connected = len({find(x) for x in range(diag.d)}) == 1
    chi = diag.d - edges + len(diag.faces)
    return connected and chi == 1


def is_tree_like(diag):
    """Contractibility of the cycle diagram.

    Polygons meet only in letters, so the complex is homotopy equivalent to
    the letter/face incidence graph.  Both the tree test on that graph and a
    connectivity plus Euler-characteristic count are run and must agree.
    """
    by_graph = nx.is_tree(_incidence_graph(diag))
    by_euler = _euler_test(diag)
    if by_graph != by_euler:
        raise AssertionError(f"tree-likeness tests disagree on {diag!r}")
    return by_graph


# -- validation ------------------------------------------------------------------

@dataclass
class ValidationReport:
    is_automaton_group: bool
    kneading_i: bool
    kneading_ii: bool
    kneading_iii: bool
    is_tree_like: bool
    witnesses: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    @property
    def is_kneading(self):
        return self.is_automaton_group and self.kneading_i and self.kneading_ii and self.kneading_iii

    def to_dict(self):
        return {
            "is_automaton_group": self.is_automaton_group,
            "kneading_i": self.kneading_i,
            "kneading_ii": self.kneading_ii,
            "kneading_iii": self.kneading_iii,
            "is_tree_like": self.is_tree_like,
            "is_kneading_automaton": self.is_kneading,
            "witnesses": self.witnesses,
            "diagnostics": list(self.diagnostics),
        }


def _single_generator(word):
    return word[0][0] if len(word) == 1 and word[0][1] == 1 else None


def validate(spec):
    """Evaluate the automaton condition and kneading conditions (i)-(iii)
    literally on the first-level recursion."""
    diagnostics = []
    witnesses = {}

    bad_sections = [
        (g.name, x, format_word(w))
        for g in spec.generators
        for x, w in enumerate(g.sections)
        if w and _single_generator(w) is None
    ]
    automaton = not bad_sections
    if bad_sections:
        witnesses["automaton"] = [{"generator": n, "letter": x, "section": w} for n, x, w in bad_sections]
        diagnostics.append(
            "not an automaton group: some sections are not single generators; "
            "kneading conditions are reported literally but do not apply"
        )

    occurrences = {g.name: [] for g in spec.generators}
    for h in spec.generators:
        for x, w in enumerate(h.sections):
            name = _single_generator(w)
            if name is not None:
                occurrences[name].append((h.name, x))
    bad_i = {name: occ for name, occ in occurrences.items() if len(occ) != 1}
    if bad_i:
        witnesses["kneading_i"] = {
            name: [{"generator": h, "letter": x} for h, x in occ] for name, occ in bad_i.items()
        }
        for name, occ in bad_i.items():
            diagnostics.append(
                f"(i) fails for {name}: appears as a section {len(occ)} times"
                + (f" ({', '.join(f'{h}|{x}' for h, x in occ)})" if occ else "")
            )

    bad_ii = []
    for g in spec.generators:
        for cyc in perm_cycles(g.perm, include_fixed=True):
            nontrivial = [x for x in cyc if g.sections[x]]
            if len(nontrivial) > 1:
                bad_ii.append({"generator": g.name, "cycle": list(cyc), "letters": nontrivial})
    if bad_ii:
        witnesses["kneading_ii"] = bad_ii
        for w in bad_ii:
            diagnostics.append(
                f"(ii) fails for {w['generator']}: cycle {tuple(w['cycle'])} has "
                f"non-trivial sections at letters {w['letters']}"
            )

    diag = cycle_diagram(spec)
    tree_like = is_tree_like(diag)
    if not tree_like:
        witnesses["kneading_iii"] = {"faces": [[n, list(c)] for n, c in diag.faces]}
        diagnostics.append("(iii) fails: the cycle diagram is not contractible")

    return ValidationReport(
        is_automaton_group=automaton,
        kneading_i=not bad_i,
        kneading_ii=not bad_ii,
        kneading_iii=tree_like,
        is_tree_like=tree_like,
        witnesses=witnesses,
        diagnostics=diagnostics,
    )
