"""Grammar source parsing: rules, LP constraints, aliases, and formalism metadata.

A grammar file is UTF-8 text with optional ``%FORMALISM``, ``%LP``,
``%ALIAS`` and ``%RULES`` sections; content before any section marker is
treated as rules.  Rules are terminated by ``.`` and may span lines;
comments run from ``//`` to end of line.  Files without a formalism header
default to DCG.

Loading is atomic: a file with any error loads nothing and every failure is
a positioned diagnostic.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

from .errors import Diagnostic, LoadError, SourceLoc
from .featstruct import (
    FeatStruct,
    Var,
    render_fs,
    render_value,
    resolve,
    unify,
    variables,
)

FORMALISMS = ("DCG", "IDLP", "GPSG", "LFG")
EMPTY_WORD = "EPSILON"
MAX_OPTIONALS = 6


# ---------------------------------------------------------------------------
# Tokenizer (shared with the lexicon interface DSL)

_PUNCT2 = ("->",)
_PUNCT1 = "|,.()[]=<:^!~#%"


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, QUOTED, PUNCT, DIRECTIVE, EOF
    text: str
    line: int
    col: int


def _ident_char(c):
    return c.isalnum() or c in "_'"


def tokenize(text, file="<string>"):
    """Tokenize grammar-style source.  Returns (tokens, diagnostics)."""
    tokens = []
    diags = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "%":
            j = i + 1
            while j < n and (text[j].isalpha() or text[j] == "_"):
                j += 1
            if j > i + 1:
                tokens.append(Token("DIRECTIVE", text[i + 1 : j], line, col))
                col += j - i
                i = j
                continue
            diags.append(
                Diagnostic("error", "stray '%'", SourceLoc(file, line, col))
            )
            i += 1
            col += 1
            continue
        if c == "'":
            j = i + 1
            while j < n and text[j] != "'" and text[j] != "\n":
                j += 1
            if j >= n or text[j] != "'":
                diags.append(
                    Diagnostic(
                        "error", "unterminated quoted terminal", SourceLoc(file, line, col)
                    )
                )
                i = j
                continue
            tokens.append(Token("QUOTED", text[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if text.startswith("->", i):
            tokens.append(Token("PUNCT", "->", line, col))
            i += 2
            col += 2
            continue
        if _ident_char(c) and c != "'":
            j = i
            while j < n and _ident_char(text[j]):
                j += 1
            tokens.append(Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c in _PUNCT1:
            tokens.append(Token("PUNCT", c, line, col))
            i += 1
            col += 1
            continue
        diags.append(
            Diagnostic("error", f"unexpected character {c!r}", SourceLoc(file, line, col))
        )
        i += 1
        col += 1
    tokens.append(Token("EOF", "", line, col))
    return tokens, diags


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class CategorySpec:
    """A category symbol plus its feature structure (or a whole-structure variable)."""

    symbol: str
    features: object = FeatStruct.EMPTY

    def render(self):
        if isinstance(self.features, FeatStruct) and self.features.is_empty():
            return self.symbol
        return f"{self.symbol}[{_render_inner(self.features)}]"


def _render_inner(features):
    if isinstance(features, Var):
        return features.name
    return render_fs(features)[1:-1]


@dataclass(frozen=True)
class FPath:
    """A path in a functional annotation, rooted at the mother (^) or self (!)."""

    root: str  # "^" | "!"
    attrs: tuple[str, ...] = ()

    def render(self):
        if not self.attrs:
            return self.root
        return "(" + self.root + " " + " ".join(self.attrs) + ")"


@dataclass(frozen=True)
class FEquation:
    lhs: FPath
    rhs: object  # FPath | atom str | FeatStruct

    def render(self):
        rhs = self.rhs.render() if isinstance(self.rhs, FPath) else render_value(self.rhs)
        return f"{self.lhs.render()}={rhs}"


@dataclass(frozen=True)
class RhsItem:
    kind: str  # "category" | "terminal" | "empty"
    symbol: str | None = None  # category symbol, terminal text, or None
    features: object = FeatStruct.EMPTY
    optional: bool = False
    annotations: tuple[FEquation, ...] = ()
    loc: SourceLoc = field(default_factory=SourceLoc, compare=False)

    def render(self):
        if self.kind == "terminal":
            return f"'{self.symbol}'"
        if self.kind == "empty":
            return EMPTY_WORD
        text = CategorySpec(self.symbol, self.features).render()
        if self.annotations:
            text += " : " + " ".join(a.render() for a in self.annotations)
        if self.optional:
            return f"({text})"
        return text


@dataclass(frozen=True)
class GrammarRule:
    lhs: CategorySpec
    rhs: tuple[RhsItem, ...]
    equations: tuple[tuple[str, object], ...] = ()
    formalism: str = "DCG"
    loc: SourceLoc = field(default_factory=SourceLoc, compare=False)

    def render(self):
        text = f"{self.lhs.render()} -> " + ", ".join(i.render() for i in self.rhs)
        if self.equations:
            text += " | " + ", ".join(
                f"{v} = {render_value(val)}" for v, val in self.equations
            )
        return text + "."

    def variable_names(self):
        names = set(v.name for v in variables(self.lhs.features))
        for item in self.rhs:
            names.update(v.name for v in variables(item.features))
        return names


@dataclass(frozen=True)
class LPConstraint:
    left: str
    right: str
    loc: SourceLoc = field(default_factory=SourceLoc, compare=False)

    def render(self):
        return f"{self.left} < {self.right}."


@dataclass(frozen=True)
class AliasDef:
    name: str
    expansion: CategorySpec
    loc: SourceLoc = field(default_factory=SourceLoc, compare=False)

    def render(self):
        return f"{self.name} = {self.expansion.render()}."


@dataclass(frozen=True)
class Variant:
    """One optional-expansion variant of a rule, EPSILON items dropped."""

    id: int
    rule: GrammarRule
    lhs: CategorySpec
    items: tuple[RhsItem, ...]


class Grammar:
    """An immutable, validated grammar."""

    def __init__(self, formalism, rules, lp=(), aliases=(), path="<string>", start="S"):
        self.formalism = formalism
        self.rules = tuple(rules)
        self.lp = tuple(lp)
        self.aliases = tuple(aliases)
        self.path = path
        self.start = start
        self._resolved = None
        self._variants = None
        self._lp_closure = None
        self._fingerprint = None
        self._left_recursion = None

    @property
    def alias_map(self):
        return {a.name: a for a in self.aliases}

    def resolved_rules(self):
        """Rules with aliases expanded on both sides (cached)."""
        if self._resolved is None:
            self._resolved = tuple(_resolve_rule(r, self.alias_map) for r in self.rules)
        return self._resolved

    def variants(self):
        if self._variants is None:
            out = []
            for rule in self.resolved_rules():
                seen = set()
                for items in _expand_optionals(rule.rhs):
                    if items in seen:  # two optional masks, same expansion
                        continue
                    seen.add(items)
                    out.append(Variant(len(out), rule, rule.lhs, items))
            self._variants = tuple(out)
        return self._variants

    def lp_closure(self):
        """Transitive closure of the LP precedence relation, as a pair set."""
        if self._lp_closure is None:
            pairs = {(c.left, c.right) for c in self.lp}
            changed = True
            while changed:
                changed = False
                for a, b in list(pairs):
                    for c, d in list(pairs):
                        if b == c and (a, d) not in pairs:
                            pairs.add((a, d))
                            changed = True
            self._lp_closure = frozenset(pairs)
        return self._lp_closure

    @property
    def fingerprint(self):
        """Content hash of the alias-resolved rule set (plus LP and formalism)."""
        if self._fingerprint is None:
            text = "\n".join(
                [self.formalism, f"start {self.start}"]
                + [r.render() for r in self.resolved_rules()]
                + sorted(c.render() for c in self.lp)
            )
            self._fingerprint = hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
        return self._fingerprint

    def left_recursion_findings(self):
        """Cached left-recursion findings; gates the top-down engine."""
        if self._left_recursion is None:
            from . import checks

            self._left_recursion = tuple(checks.check_left_recursion(self))
        return self._left_recursion

    def render(self):
        lines = [f"%FORMALISM {self.formalism}"]
        if self.lp:
            lines.append("%LP")
            lines.extend(c.render() for c in self.lp)
        if self.aliases:
            lines.append("%ALIAS")
            lines.extend(a.render() for a in self.aliases)
        lines.append("%RULES")
        lines.extend(r.render() for r in self.rules)
        return "\n".join(lines) + "\n"


def _resolve_spec(spec, alias_map, loc, diags):
    seen = {spec.symbol} if spec.symbol in alias_map else set()
    symbol, features = spec.symbol, spec.features
    while symbol in alias_map:
        expansion = alias_map[symbol].expansion
        r = unify(features, expansion.features)
        if not r:
            diags.append(
                Diagnostic(
                    "error",
                    f"feature clash while expanding alias {symbol!r} at "
                    f"path {'.'.join(r.path) or '<root>'}",
                    loc,
                )
            )
            return CategorySpec(expansion.symbol, features)
        features = resolve(r.value, r.env)
        symbol = expansion.symbol
        if symbol in seen:
            break  # cycle; reported by the alias cycle check
        seen.add(symbol)
    return CategorySpec(symbol, features)


def _resolve_rule(rule, alias_map):
    diags = []
    lhs = _resolve_spec(rule.lhs, alias_map, rule.loc, diags)
    rhs = []
    for item in rule.rhs:
        if item.kind == "category" and item.symbol in alias_map:
            spec = _resolve_spec(
                CategorySpec(item.symbol, item.features), alias_map, item.loc, diags
            )
            item = RhsItem(
                "category", spec.symbol, spec.features, item.optional, item.annotations, item.loc
            )
        rhs.append(item)
    if diags:
        raise LoadError(diags)
    return GrammarRule(lhs, tuple(rhs), rule.equations, rule.formalism, rule.loc)


def _expand_optionals(rhs):
    """All include/exclude combinations of optional items, all-included first."""
    optional_idx = [i for i, item in enumerate(rhs) if item.optional]
    for included in itertools.product((True, False), repeat=len(optional_idx)):
        keep = dict(zip(optional_idx, included))
        items = []
        for i, item in enumerate(rhs):
            if item.kind == "empty":
                continue
            if item.optional and not keep[i]:
                continue
            if item.optional:
                item = RhsItem(
                    item.kind, item.symbol, item.features, False, item.annotations, item.loc
                )
            items.append(item)
        yield tuple(items)


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens, file, formalism):
        self.tokens = tokens
        self.i = 0
        self.file = file
        self.formalism = formalism
        self.diags = []

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at_punct(self, text):
        t = self.peek()
        return t.kind == "PUNCT" and t.text == text

    def loc(self, tok=None):
        tok = tok or self.peek()
        return SourceLoc(self.file, tok.line, tok.col)

    def error(self, message, tok=None):
        self.diags.append(Diagnostic("error", message, self.loc(tok)))

    def warn(self, message, tok=None):
        self.diags.append(Diagnostic("warning", message, self.loc(tok)))

    def expect_punct(self, text):
        if self.at_punct(text):
            return self.next()
        self.error(f"expected {text!r}, found {self.peek().text!r}")
        return None

    def skip_to_rule_end(self):
        while not self.at_punct(".") and self.peek().kind not in ("EOF", "DIRECTIVE"):
            self.next()
        if self.at_punct("."):
            self.next()

    # -- feature structures ------------------------------------------------

    def feature_block(self):
        """Parse ``[...]`` after a symbol: a variable or a feature list."""
        self.expect_punct("[")
        t = self.peek()
        if self.at_punct("]"):
            self.next()
            return FeatStruct.EMPTY
        if t.kind == "IDENT" and t.text[0].isupper():
            nxt = self.tokens[self.i + 1]
            if nxt.kind == "PUNCT" and nxt.text == "]":
                self.next()
                self.next()
                return Var(t.text)
        pairs = []
        while True:
            name_tok = self.next()
            if name_tok.kind != "IDENT" or name_tok.text[0].isupper():
                self.error("feature name must be a lowercase identifier", name_tok)
                return FeatStruct.EMPTY
            if self.expect_punct("=") is None:
                return FeatStruct.EMPTY
            value = self.feature_value()
            pairs.append((name_tok.text, value))
            if self.at_punct(","):
                self.next()
                continue
            if self.expect_punct("]") is None:
                return FeatStruct.EMPTY
            try:
                return FeatStruct(pairs)
            except ValueError as exc:
                self.error(str(exc), name_tok)
                return FeatStruct.EMPTY

    def feature_value(self):
        t = self.peek()
        if self.at_punct("["):
            return self.feature_block()
        if t.kind == "IDENT":
            self.next()
            if t.text[0].isupper():
                return Var(t.text)
            return t.text
        self.error(f"expected a feature value, found {t.text!r}", t)
        self.next()
        return FeatStruct.EMPTY

    def category_spec(self, role):
        tok = self.next()
        if tok.kind != "IDENT":
            self.error(f"expected a category symbol for the {role}, found {tok.text!r}", tok)
            return None
        if not tok.text[0].isupper():
            self.error(
                f"category symbol must start with an uppercase letter: {tok.text!r}", tok
            )
            return None
        features = FeatStruct.EMPTY
        if self.at_punct("["):
            features = self.feature_block()
        return CategorySpec(tok.text, features), self.loc(tok)

    # -- functional annotations --------------------------------------------

    def fpath(self):
        if self.at_punct("^") or self.at_punct("!"):
            root = self.next().text
            return FPath(root)
        if self.at_punct("("):
            self.next()
            root_tok = self.next()
            if root_tok.text not in ("^", "!"):
                self.error("annotation path must start with '^' or '!'", root_tok)
                return None
            attrs = []
            while self.peek().kind == "IDENT":
                attrs.append(self.next().text)
            if self.expect_punct(")") is None:
                return None
            if not attrs:
                self.error("parenthesized annotation path needs an attribute", root_tok)
                return None
            return FPath(root_tok.text, tuple(attrs))
        self.error(f"expected an annotation path, found {self.peek().text!r}")
        return None

    def annotations(self):
        """One or more whitespace-separated equations after ':'."""
        eqs = []
        while self.at_punct("^") or self.at_punct("!") or self.at_punct("("):
            lhs = self.fpath()
            if lhs is None:
                return tuple(eqs)
            if self.expect_punct("=") is None:
                return tuple(eqs)
            if self.at_punct("^") or self.at_punct("!") or self.at_punct("("):
                rhs = self.fpath()
                if rhs is None:
                    return tuple(eqs)
            elif self.at_punct("["):
                rhs = self.feature_block()
            else:
                t = self.next()
                if t.kind != "IDENT":
                    self.error("expected an annotation value", t)
                    return tuple(eqs)
                rhs = t.text
            eqs.append(FEquation(lhs, rhs))
        if not eqs:
            self.error("expected at least one annotation after ':'")
        return tuple(eqs)

    # -- rules ---------------------------------------------------------------

    def rhs_item(self):
        t = self.peek()
        if t.kind == "QUOTED":
            self.next()
            return RhsItem("terminal", t.text, loc=self.loc(t))
        if self.at_punct("("):
            self.next()
            inner = self.category_spec("optional constituent")
            if inner is None:
                return None
            spec, loc = inner
            annots = ()
            if self.at_punct(":"):
                self.next()
                annots = self.annotations()
            self.expect_punct(")")
            if spec.symbol == EMPTY_WORD:
                self.error("the empty constituent cannot be optional", t)
                return None
            return RhsItem("category", spec.symbol, spec.features, True, annots, loc)
        if t.kind == "IDENT" and t.text == EMPTY_WORD:
            self.next()
            if self.at_punct("["):
                self.error("the empty constituent carries no features", t)
                self.feature_block()
            return RhsItem("empty", loc=self.loc(t))
        inner = self.category_spec("constituent")
        if inner is None:
            return None
        spec, loc = inner
        annots = ()
        if self.at_punct(":"):
            self.next()
            annots = self.annotations()
        return RhsItem("category", spec.symbol, spec.features, False, annots, loc)

    def equation_list(self):
        eqs = []
        while True:
            t = self.next()
            if t.kind != "IDENT" or not t.text[0].isupper():
                self.error("equation must start with a variable", t)
                return tuple(eqs)
            if self.expect_punct("=") is None:
                return tuple(eqs)
            eqs.append((t.text, self.feature_value()))
            if self.at_punct(","):
                self.next()
                continue
            return tuple(eqs)

    def rule(self):
        start_tok = self.peek()
        before = len(self.diags)
        lhs = self.category_spec("rule head")
        if lhs is None or self.expect_punct("->") is None:
            self.skip_to_rule_end()
            return None
        lhs_spec, _ = lhs
        items = []
        while True:
            item = self.rhs_item()
            if item is None:
                self.skip_to_rule_end()
                return None
            items.append(item)
            if self.at_punct(","):
                self.next()
                continue
            break
        equations = ()
        if self.at_punct("|"):
            self.next()
            equations = self.equation_list()
        if self.expect_punct(".") is None:
            self.skip_to_rule_end()
            return None
        if len(self.diags) > before:
            return None
        return GrammarRule(
            lhs_spec, tuple(items), equations, self.formalism, self.loc(start_tok)
        )

    def lp_constraint(self):
        left = self.next()
        ok = left.kind == "IDENT" and left.text[0].isupper()
        if not ok:
            self.error("LP constraint must relate category symbols", left)
        if self.expect_punct("<") is None:
            self.skip_to_rule_end()
            return None
        right = self.next()
        if right.kind != "IDENT" or not right.text[0].isupper():
            self.error("LP constraint must relate category symbols", right)
            self.skip_to_rule_end()
            return None
        self.expect_punct(".")
        if not ok:
            return None
        if left.text == right.text:
            self.error(f"LP constraint relates {left.text!r} to itself", left)
            return None
        return LPConstraint(left.text, right.text, self.loc(left))

    def alias_def(self):
        name = self.next()
        if name.kind != "IDENT" or not name.text[0].isupper():
            self.error("alias name must start with an uppercase letter", name)
            self.skip_to_rule_end()
            return None
        if self.expect_punct("=") is None:
            self.skip_to_rule_end()
            return None
        spec = self.category_spec("alias expansion")
        if spec is None:
            self.skip_to_rule_end()
            return None
        self.expect_punct(".")
        return AliasDef(name.text, spec[0], self.loc(name))


def _validate(rules, lp, aliases, formalism, diags, file):
    for rule in rules:
        rule_vars = rule.variable_names()
        for var, value in rule.equations:
            if var not in rule_vars:
                diags.append(
                    Diagnostic(
                        "error",
                        f"equation references variable {var!r} which does not "
                        f"occur in the rule",
                        rule.loc,
                    )
                )
        if formalism != "LFG":
            for item in rule.rhs:
                if item.annotations:
                    diags.append(
                        Diagnostic(
                            "error",
                            "functional annotations are only admissible under LFG",
                            item.loc,
                        )
                    )
        n_opt = sum(1 for item in rule.rhs if item.optional)
        if n_opt > MAX_OPTIONALS:
            diags.append(
                Diagnostic(
                    "error",
                    f"rule has {n_opt} optional constituents; at most "
                    f"{MAX_OPTIONALS} are supported",
                    rule.loc,
                )
            )
    if lp and formalism not in ("IDLP", "GPSG"):
        diags.append(
            Diagnostic(
                "error",
                f"LP constraints are only admissible under ID/LP or GPSG, "
                f"not {formalism}",
                lp[0].loc,
            )
        )
    seen = {}
    for alias in aliases:
        if alias.name in seen:
            diags.append(
                Diagnostic("error", f"duplicate alias definition: {alias.name!r}", alias.loc)
            )
        seen[alias.name] = alias


def _alias_cycle_errors(aliases):
    """Alias cycles block loading because rules cannot be resolved."""
    from . import checks

    diags = []
    for finding in checks.check_alias_cycles(aliases):
        diags.append(
            Diagnostic(
                "error",
                f"alias definitions form a cycle: {' -> '.join(finding.witness)}",
                finding.locations[0] if finding.locations else SourceLoc(),
            )
        )
    return diags


def parse_grammar(text, formalism=None, file="<string>", start="S"):
    """Parse grammar source text into a Grammar.

    Raises LoadError carrying all positioned diagnostics if anything is
    wrong; a partially correct file never produces a partially loaded
    grammar.
    """
    tokens, diags = tokenize(text, file)
    parser = _Parser(tokens, file, formalism or "DCG")
    parser.diags = diags
    rules, lp, aliases = [], [], []
    section = "RULES"
    header_formalism = None
    while parser.peek().kind != "EOF":
        tok = parser.peek()
        if tok.kind == "DIRECTIVE":
            parser.next()
            if tok.text == "FORMALISM":
                name = parser.next()
                if name.kind == "IDENT" and name.text.upper() in FORMALISMS:
                    header_formalism = name.text.upper()
                    parser.formalism = formalism or header_formalism
                else:
                    parser.error(
                        f"unknown formalism {name.text!r}; expected one of "
                        f"{', '.join(FORMALISMS)}",
                        name,
                    )
            elif tok.text in ("LP", "ALIAS", "RULES"):
                section = tok.text
            else:
                parser.error(f"unknown directive %{tok.text}", tok)
            continue
        if section == "LP":
            c = parser.lp_constraint()
            if c:
                lp.append(c)
        elif section == "ALIAS":
            a = parser.alias_def()
            if a:
                aliases.append(a)
        else:
            r = parser.rule()
            if r:
                rules.append(r)
    final_formalism = formalism or header_formalism or "DCG"
    rules = [
        GrammarRule(r.lhs, r.rhs, r.equations, final_formalism, r.loc) for r in rules
    ]
    _validate(rules, lp, aliases, final_formalism, parser.diags, file)
    errors = [d for d in parser.diags if d.severity == "error"]
    if errors:
        raise LoadError(parser.diags)
    alias_errors = _alias_cycle_errors(aliases)
    if alias_errors:
        raise LoadError(parser.diags + alias_errors)
    g = Grammar(final_formalism, rules, lp, aliases, file, start)
    g.resolved_rules()  # alias merges must unify; raises LoadError otherwise
    return g


def load_grammar(path, formalism=None, start="S"):
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return parse_grammar(text, formalism=formalism, file=str(path), start=start)


def resolve_alias(name, aliases):
    """Fully expand an alias chain, merging feature structures by unification."""
    alias_map = {a.name: a for a in aliases}
    if name not in alias_map:
        raise KeyError(f"unknown alias: {name!r}")
    diags = []
    spec = _resolve_spec(
        CategorySpec(name), alias_map, alias_map[name].loc, diags
    )
    if diags:
        raise LoadError(diags)
    return spec


# ---------------------------------------------------------------------------
# Index


@dataclass
class IndexEntry:
    symbol: str
    defined_by: list
    referenced_by: list

    def to_json_dict(self):
        return {
            "symbol": self.symbol,
            "defined_by": [
                {"rule": r.render(), "line": r.loc.line, "file": r.loc.file}
                for r in self.defined_by
            ],
            "referenced_by": [
                {"rule": r.render(), "line": r.loc.line, "file": r.loc.file}
                for r in self.referenced_by
            ],
        }


def grammar_index(grammar):
    """Map every category symbol to its defining and referencing rules."""
    index = {}

    def entry(symbol):
        if symbol not in index:
            index[symbol] = IndexEntry(symbol, [], [])
        return index[symbol]

    for rule in grammar.resolved_rules():
        entry(rule.lhs.symbol).defined_by.append(rule)
        for item in rule.rhs:
            if item.kind == "category":
                e = entry(item.symbol)
                if rule not in e.referenced_by:
                    e.referenced_by.append(rule)
    return dict(sorted(index.items()))


def render_index(index):
    lines = []
    for symbol, e in index.items():
        lines.append(f"{symbol}: {len(e.defined_by)} rule(s), referenced by "
                     f"{len(e.referenced_by)}")
        for r in e.defined_by:
            lines.append(f"    defines   {r.render()}")
        for r in e.referenced_by:
            lines.append(f"    used in   {r.render()}")
    return "\n".join(lines)
