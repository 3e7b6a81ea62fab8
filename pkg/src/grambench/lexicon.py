"""Hand-coded lexicon storage, lookup, and the lexicon interface rule DSL.

A lexicon file holds one entry per line, ``surface : f1=v1, f2=v2, ...``;
every entry must carry a ``pos`` feature.  Interface rules live in their own
file and map lexical entries into grammar categories:

    noun_basic : if_in_lex (pos=noun, !kasus) then_in_gram (N[kas=#kasus, person=3]).

The test criterion accepts ``f=v`` (feature equals an atom), ``!f`` (the
feature must have some value) and ``~f`` (the feature must have no value).
In the specification, ``#name`` copies the value of the lexicon feature
``name``; other values are atom constants and may introduce features the
lexicon does not have.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Diagnostic, InterfaceEvalError, LoadError, SourceLoc
from .featstruct import FeatStruct
from .grammar import CategorySpec, tokenize


@dataclass(frozen=True)
class LexEntry:
    surface: str
    features: FeatStruct
    source: str = "<string>"
    line: int = 0

    def render(self):
        feats = ", ".join(f"{n}={v}" for n, v in self.features.items())
        return f"{self.surface} : {feats}"


class Lexicon:
    """An immutable word-form lexicon; lookups are exact and case-sensitive."""

    def __init__(self, entries, path="<string>"):
        self.entries = tuple(entries)
        self.path = path
        self._by_surface = {}
        for e in self.entries:
            self._by_surface.setdefault(e.surface, []).append(e)

    def __len__(self):
        return len(self.entries)

    def lookup(self, word):
        """All entries for ``word`` in file order; [] for unknown words."""
        return list(self._by_surface.get(word, ()))


def lookup(word, lexicon):
    return lexicon.lookup(word)


def parse_lexicon(text, file="<string>"):
    """Parse lexicon text; atomic, with positioned diagnostics."""
    entries = []
    diags = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        loc = SourceLoc(file, lineno, 1)
        if ":" not in line:
            diags.append(
                Diagnostic("error", "expected 'surface : feature=value, ...'", loc)
            )
            continue
        surface, _, feat_text = line.partition(":")
        surface = surface.strip()
        if not surface:
            diags.append(Diagnostic("error", "entry has an empty surface form", loc))
            continue
        pairs = []
        ok = True
        for part in feat_text.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                diags.append(
                    Diagnostic("error", f"malformed feature assignment {part!r}", loc)
                )
                ok = False
                break
            name, _, value = part.partition("=")
            name, value = name.strip(), value.strip()
            if not name or not name[0].islower():
                diags.append(
                    Diagnostic("error", f"feature name must be lowercase: {name!r}", loc)
                )
                ok = False
                break
            pairs.append((name, value))
        if not ok:
            continue
        try:
            features = FeatStruct(pairs)
        except ValueError as exc:
            diags.append(Diagnostic("error", str(exc), loc))
            continue
        if "pos" not in features:
            diags.append(Diagnostic("error", "entry is missing the 'pos' feature", loc))
            continue
        entries.append(LexEntry(surface, features, file, lineno))
    if any(d.severity == "error" for d in diags):
        raise LoadError(diags)
    return Lexicon(entries, file)


def load_lexicon(path):
    with open(path, encoding="utf-8") as f:
        return parse_lexicon(f.read(), file=str(path))


# ---------------------------------------------------------------------------
# Interface rules


@dataclass(frozen=True)
class Criterion:
    kind: str  # "equals" | "must_have" | "must_lack"
    feature: str
    value: str | None = None

    def render(self):
        if self.kind == "equals":
            return f"{self.feature}={self.value}"
        return ("!" if self.kind == "must_have" else "~") + self.feature

    def holds(self, features):
        if self.kind == "equals":
            return features.get(self.feature) == self.value
        if self.kind == "must_have":
            return self.feature in features
        return self.feature not in features


@dataclass(frozen=True)
class CopyRef:
    """A ``#name`` specification value: copy that feature from the entry."""

    name: str


@dataclass(frozen=True)
class SpecItem:
    feature: str
    value: object  # atom str | CopyRef


@dataclass(frozen=True)
class InterfaceRule:
    name: str
    test: tuple[Criterion, ...]
    symbol: str
    spec: tuple[SpecItem, ...]
    loc: SourceLoc = field(default_factory=SourceLoc, compare=False)

    def render(self):
        test = ", ".join(c.render() for c in self.test)
        spec = ", ".join(
            f"{s.feature}=#{s.value.name}"
            if isinstance(s.value, CopyRef)
            else f"{s.feature}={s.value}"
            for s in self.spec
        )
        target = f"{self.symbol}[{spec}]" if spec else self.symbol
        return f"{self.name} : if_in_lex ({test}) then_in_gram ({target})."

    def matches(self, entry):
        return all(c.holds(entry.features) for c in self.test)

    def apply(self, entry):
        """The category this rule emits for a matching entry."""
        pairs = []
        for item in self.spec:
            if isinstance(item.value, CopyRef):
                value = entry.features.get(item.value.name)
                if value is None:
                    raise InterfaceEvalError(self.name, item.value.name, self.loc)
                pairs.append((item.feature, value))
            else:
                pairs.append((item.feature, item.value))
        return CategorySpec(self.symbol, FeatStruct(pairs))


class InterfaceRuleSet:
    def __init__(self, rules, path="<string>", warnings=()):
        self.rules = tuple(rules)
        self.path = path
        self.warnings = tuple(warnings)

    def __len__(self):
        return len(self.rules)

    def target_symbols(self):
        """Category symbols these rules can introduce (the preterminals)."""
        return sorted({r.symbol for r in self.rules})


def apply_interface_rules(entry, rules):
    """All categories emitted for ``entry``, one per matching rule, in rule order."""
    if isinstance(rules, InterfaceRuleSet):
        rules = rules.rules
    return [rule.apply(entry) for rule in rules if rule.matches(entry)]


def _parse_criteria(p):
    crits = []
    if p.expect_punct("(") is None:
        return None
    while True:
        if p.at_punct("!") or p.at_punct("~"):
            mark = p.next().text
            name = p.next()
            if name.kind != "IDENT" or not name.text[0].islower():
                p.error("constraint needs a lowercase feature name", name)
                return None
            crits.append(
                Criterion("must_have" if mark == "!" else "must_lack", name.text)
            )
        else:
            name = p.next()
            if name.kind != "IDENT" or not name.text[0].islower():
                p.error("test criterion needs a lowercase feature name", name)
                return None
            if p.expect_punct("=") is None:
                return None
            value = p.next()
            if value.kind != "IDENT":
                p.error("test criterion value must be an atom", value)
                return None
            crits.append(Criterion("equals", name.text, value.text))
        if p.at_punct(","):
            p.next()
            continue
        if p.expect_punct(")") is None:
            return None
        return tuple(crits)


def _parse_specification(p):
    if p.expect_punct("(") is None:
        return None
    symbol = p.next()
    if symbol.kind != "IDENT" or not symbol.text[0].isupper():
        p.error("specification must name a category (uppercase symbol)", symbol)
        return None
    items = []
    if p.at_punct("["):
        p.next()
        if p.at_punct("]"):
            p.next()
        else:
            while True:
                name = p.next()
                if name.kind != "IDENT" or not name.text[0].islower():
                    p.error("specification feature name must be lowercase", name)
                    return None
                if p.expect_punct("=") is None:
                    return None
                if p.at_punct("#"):
                    p.next()
                    ref = p.next()
                    if ref.kind != "IDENT":
                        p.error("'#' must be followed by a lexicon feature name", ref)
                        return None
                    value = CopyRef(ref.text)
                else:
                    atom = p.next()
                    if atom.kind != "IDENT" or atom.text[0].isupper():
                        p.error("specification value must be an atom or '#feature'", atom)
                        return None
                    value = atom.text
                items.append(SpecItem(name.text, value))
                if p.at_punct(","):
                    p.next()
                    continue
                if p.expect_punct("]") is None:
                    return None
                break
    if p.expect_punct(")") is None:
        return None
    return symbol.text, tuple(items)


def parse_interface_rules(text, formalism=None, file="<string>"):
    """Parse and validate interface rules; atomic load."""
    from .grammar import _Parser

    tokens, diags = tokenize(text, file)
    p = _Parser(tokens, file, formalism or "DCG")
    p.diags = diags
    rules = []
    while p.peek().kind != "EOF":
        name = p.next()
        if name.kind != "IDENT":
            p.error(f"expected a rule name, found {name.text!r}", name)
            p.skip_to_rule_end()
            continue
        loc = p.loc(name)
        if p.expect_punct(":") is None:
            p.skip_to_rule_end()
            continue
        kw = p.next()
        if kw.kind != "IDENT" or kw.text != "if_in_lex":
            p.error("expected 'if_in_lex'", kw)
            p.skip_to_rule_end()
            continue
        test = _parse_criteria(p)
        if test is None:
            p.skip_to_rule_end()
            continue
        kw = p.next()
        if kw.kind != "IDENT" or kw.text != "then_in_gram":
            p.error("expected 'then_in_gram'", kw)
            p.skip_to_rule_end()
            continue
        spec = _parse_specification(p)
        if spec is None:
            p.skip_to_rule_end()
            continue
        if p.expect_punct(".") is None:
            p.skip_to_rule_end()
            continue
        rules.append(InterfaceRule(name.text, test, spec[0], spec[1], loc))
    _validate_rules(rules, p.diags)
    errors = [d for d in p.diags if d.severity == "error"]
    if errors:
        raise LoadError(p.diags)
    warnings = [d for d in p.diags if d.severity == "warning"]
    return InterfaceRuleSet(rules, file, warnings)


def _validate_rules(rules, diags):
    seen = set()
    for rule in rules:
        if rule.name in seen:
            diags.append(
                Diagnostic("error", f"duplicate interface rule name: {rule.name!r}", rule.loc)
            )
        seen.add(rule.name)
        by_feature = {}
        for c in rule.test:
            by_feature.setdefault(c.feature, set()).add(c.kind)
        for feature, kinds in by_feature.items():
            if "must_lack" in kinds and kinds & {"must_have", "equals"}:
                diags.append(
                    Diagnostic(
                        "error",
                        f"rule {rule.name!r} both requires and prohibits "
                        f"feature {feature!r}",
                        rule.loc,
                    )
                )
        guaranteed = {
            c.feature for c in rule.test if c.kind in ("equals", "must_have")
        }
        for item in rule.spec:
            if isinstance(item.value, CopyRef) and item.value.name not in guaranteed:
                diags.append(
                    Diagnostic(
                        "warning",
                        f"rule {rule.name!r} copies #{item.value.name} without "
                        f"testing that the feature exists (unchecked copy)",
                        rule.loc,
                    )
                )


def load_interface_rules(path, formalism=None):
    with open(path, encoding="utf-8") as f:
        return parse_interface_rules(f.read(), formalism=formalism, file=str(path))


class BoundLexicon:
    """A lexicon joined with interface rules; what the parse engines consume."""

    def __init__(self, lexicon, rules):
        self.lexicon = lexicon
        self.rules = rules
        self._cache = {}

    def categories(self, word):
        """Lexical categories for a word: the specification applied per entry."""
        if word not in self._cache:
            cats = []
            for entry in self.lexicon.lookup(word):
                cats.extend(apply_interface_rules(entry, self.rules))
            self._cache[word] = cats
        return list(self._cache[word])

    def trace(self, word):
        """(entry, categories) pairs, for the lexicon lookup trace."""
        return [
            (entry, apply_interface_rules(entry, self.rules))
            for entry in self.lexicon.lookup(word)
        ]

    def preterminals(self):
        return self.rules.target_symbols()
