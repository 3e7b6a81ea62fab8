"""Feature structures with shared variables, unification and subsumption.

A feature structure maps lowercase feature names to values; a value is an
atom (lowercase identifier or number), a variable (capitalized identifier),
an instantiated atom (unique per use, for predicate values), or a nested
feature structure.  Variables are interpreted relative to a binding
environment; two occurrences of the same variable denote one shared cell.

Structures are immutable.  Unification never mutates its inputs: it returns
a fresh environment on success and leaves the given one untouched on
failure.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Var:
    """A variable reference (capitalized identifier)."""

    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Inst:
    """An instantiated atom: equal only to itself, never to another use.

    Used for predicate values in functional structures, where two uses of
    the same lemma must not unify.
    """

    base: str
    uid: int

    def __repr__(self):
        return f"{self.base}%{self.uid}"


class FeatStruct:
    """An immutable attribute-value matrix with lexicographically sorted keys."""

    __slots__ = ("_items",)

    def __init__(self, pairs=()):
        if isinstance(pairs, dict):
            pairs = pairs.items()
        items = sorted(pairs)
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            dup = sorted(n for n in set(names) if names.count(n) > 1)[0]
            raise ValueError(f"duplicate feature name: {dup}")
        object.__setattr__(self, "_items", tuple(items))

    EMPTY: "FeatStruct"

    def items(self):
        return self._items

    def names(self):
        return tuple(n for n, _ in self._items)

    def get(self, name, default=None):
        for n, v in self._items:
            if n == name:
                return v
        return default

    def __contains__(self, name):
        return any(n == name for n, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        # An empty structure is still a real value.
        return True

    def is_empty(self):
        return not self._items

    def __eq__(self, other):
        return isinstance(other, FeatStruct) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        return render_fs(self)


FeatStruct.EMPTY = FeatStruct()

# A value is: str (atom) | Var | Inst | FeatStruct.
Value = object


def _deref(value, env):
    """Follow a variable chain.  Returns (representative Var or None, value or None).

    The representative is the last variable in the chain; the value is what it
    is bound to, or None if the chain ends in an unbound variable.
    """
    rep = None
    seen = set()
    while isinstance(value, Var):
        if value.name in seen:
            raise RuntimeError(f"cyclic variable chain through {value.name}")
        seen.add(value.name)
        rep = value
        if value.name in env:
            value = env[value.name]
        else:
            return rep, None
    return rep, value


def resolve(value, env):
    """Substitute bindings throughout ``value``; unbound variables remain.

    Returns the input object itself when nothing needed substituting.
    """
    rep, val = _deref(value, env)
    if val is None:
        return rep
    if isinstance(val, FeatStruct):
        out = []
        changed = False
        for n, v in val.items():
            nv = resolve(v, env)
            changed = changed or nv is not v
            out.append((n, nv))
        return FeatStruct(out) if changed else val
    return val


def _occurs(var, value, env):
    rep, val = _deref(value, env)
    if rep is not None and rep.name == var.name:
        return True
    if isinstance(val, FeatStruct):
        return any(_occurs(var, v, env) for _, v in val.items())
    return False


@dataclass
class UnifyResult:
    ok: bool
    value: Value
    env: dict
    reason: str | None = None  # "clash" | "occurs"
    path: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


_FAIL = object()


def _unify(a, b, env, path, failure):
    """Unify in place into ``env``.  Returns the unified value or _FAIL.

    On failure, appends (reason, path) to ``failure``.
    """
    ra, va = _deref(a, env)
    rb, vb = _deref(b, env)

    # Both unbound: alias the lexicographically greater name to the smaller.
    if va is None and vb is None:
        if ra.name == rb.name:
            return ra
        keep, drop = (ra, rb) if ra.name < rb.name else (rb, ra)
        env[drop.name] = keep
        return keep

    if va is None:
        if _occurs(ra, vb, env):
            failure.append(("occurs", path))
            return _FAIL
        env[ra.name] = rb if rb is not None else vb
        return ra
    if vb is None:
        if _occurs(rb, va, env):
            failure.append(("occurs", path))
            return _FAIL
        env[rb.name] = ra if ra is not None else va
        return rb

    if isinstance(va, FeatStruct) and isinstance(vb, FeatStruct):
        # Rebinding a shared cell to the merge must not make it contain itself.
        if ra is not None and _occurs(ra, vb, env):
            failure.append(("occurs", path))
            return _FAIL
        if rb is not None and _occurs(rb, va, env):
            failure.append(("occurs", path))
            return _FAIL
        merged = {}
        bnames = dict(vb.items())
        for n, v in va.items():
            if n in bnames:
                r = _unify(v, bnames[n], env, path + (n,), failure)
                if r is _FAIL:
                    return _FAIL
                merged[n] = r
            else:
                merged[n] = v
        for n, v in vb.items():
            if n not in merged:
                merged[n] = v
        result = FeatStruct(merged)
        # Rebind the shared cells so every alias of either side sees the merge.
        if ra is not None and rb is not None and ra.name != rb.name:
            env[rb.name] = ra
        rep = ra if ra is not None else rb
        if rep is not None:
            env[rep.name] = result
            return rep
        return result

    # Atom-ish values: atoms, instantiated atoms, or a mix with structures.
    if isinstance(va, str) and isinstance(vb, str):
        if va == vb:
            return ra if ra is not None else va
    elif isinstance(va, Inst) and isinstance(vb, Inst):
        if va == vb:
            return ra if ra is not None else va
    failure.append(("clash", path))
    return _FAIL


def unify(a, b, env=None):
    """Unify two values under an environment (copying semantics).

    Returns a UnifyResult.  On success ``result.env`` is a new, extended
    environment and ``result.value`` the unified value.  On failure the
    original environment is returned unchanged, with the failure kind and
    the first conflicting feature path (depth-first, features in
    lexicographic order).
    """
    if env is None:
        env = {}
    work = dict(env)
    failure = []
    r = _unify(a, b, work, (), failure)
    if r is _FAIL:
        reason, path = failure[0]
        return UnifyResult(False, None, env, reason, path)
    return UnifyResult(True, r, work)


def _subsumes_value(x, y, mapping):
    if isinstance(x, Var):
        if x.name in mapping:
            return mapping[x.name] == y
        mapping[x.name] = y
        return True
    if isinstance(x, str) or isinstance(x, Inst):
        return x == y
    if isinstance(x, FeatStruct):
        if not isinstance(y, FeatStruct):
            return False
        for n, v in x.items():
            if n not in y:
                return False
            if not _subsumes_value(v, y.get(n), mapping):
                return False
        return True
    raise TypeError(f"not a feature value: {x!r}")


def subsumes(a, b, env=None):
    """True iff every feature path and value of ``a`` occurs in ``b``.

    Variables in ``a`` may map to anything in ``b`` as long as shared
    occurrences map consistently.  Inputs are resolved under ``env`` first.
    """
    if env:
        a = resolve(a, env)
        b = resolve(b, env)
    return _subsumes_value(a, b, {})


def equivalent(a, b, env=None):
    """Equality up to variable renaming: mutual subsumption."""
    return subsumes(a, b, env) and subsumes(b, a, env)


def variables(value):
    """All variables occurring in ``value``, in depth-first order."""
    out = []

    def walk(v):
        if isinstance(v, Var):
            out.append(v)
        elif isinstance(v, FeatStruct):
            for _, x in v.items():
                walk(x)

    walk(value)
    return out


def rename_variables(value, rename):
    """Return a copy of ``value`` with every Var name passed through ``rename``.

    Variable-free values come back unchanged, as the same object.
    """
    if isinstance(value, Var):
        return Var(rename(value.name))
    if isinstance(value, FeatStruct):
        out = []
        changed = False
        for n, v in value.items():
            nv = rename_variables(v, rename)
            changed = changed or nv is not v
            out.append((n, nv))
        return FeatStruct(out) if changed else value
    return value


def is_ground(value):
    """True iff ``value`` contains no variables."""
    if isinstance(value, Var):
        return False
    if isinstance(value, FeatStruct):
        return all(is_ground(v) for _, v in value.items())
    return True


class Renamer:
    """Maps variable names to fresh instance-scoped names, consistently."""

    def __init__(self, suffix):
        self.suffix = suffix
        self._map = {}

    def __call__(self, name):
        base = name.split("~", 1)[0]
        if name not in self._map:
            self._map[name] = f"{base}~{self.suffix}"
        return self._map[name]


def normalize_coindices(values):
    """Canonically rename variables and instantiated atoms across ``values``.

    Variables become V1, V2, ... in first-occurrence order (features visited
    lexicographically); Inst uids are renumbered the same way.  Accepts a
    single value or a list; returns the same shape.
    """
    single = not isinstance(values, (list, tuple))
    if single:
        values = [values]
    vmap = {}
    imap = {}

    def walk(v):
        if isinstance(v, Var):
            if v.name not in vmap:
                vmap[v.name] = Var(f"V{len(vmap) + 1}")
            return vmap[v.name]
        if isinstance(v, Inst):
            key = (v.base, v.uid)
            if key not in imap:
                imap[key] = Inst(v.base, len(imap) + 1)
            return imap[key]
        if isinstance(v, FeatStruct):
            return FeatStruct((n, walk(x)) for n, x in v.items())
        return v

    out = [walk(v) for v in values]
    return out[0] if single else out


def render_value(value):
    if isinstance(value, Var):
        return value.name
    if isinstance(value, Inst):
        return f"{value.base}%{value.uid}"
    if isinstance(value, FeatStruct):
        return render_fs(value)
    return value


def render_fs(fs, style="bracketed"):
    """Render a feature structure as text.

    ``bracketed`` is the one-line form used in grammar rules, which is also
    the serialization format; ``indented`` puts one feature per line with
    nested structures indented.
    """
    if style == "bracketed":
        return "[" + ", ".join(f"{n}={render_value(v)}" for n, v in fs.items()) + "]"
    if style == "indented":
        lines = []

        def walk(struct, indent):
            for n, v in struct.items():
                if isinstance(v, FeatStruct):
                    if v.is_empty():
                        lines.append(f"{'    ' * indent}{n} = []")
                    else:
                        lines.append(f"{'    ' * indent}{n} =")
                        walk(v, indent + 1)
                else:
                    lines.append(f"{'    ' * indent}{n} = {render_value(v)}")

        if fs.is_empty():
            return "[]"
        walk(fs, 0)
        return "\n".join(lines)
    raise ValueError(f"unknown render style: {style}")


_IDENT_CHARS = "_-'"


def _is_ident_char(c):
    return c.isalnum() or c in _IDENT_CHARS


def parse_fs(text):
    """Parse the bracketed syntax back into a FeatStruct.

    Accepts exactly what render_fs produces plus arbitrary whitespace.
    Raises ValueError with a column number on malformed input.
    """
    pos = 0
    n = len(text)

    def err(msg, at):
        raise ValueError(f"column {at + 1}: {msg}")

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != ch:
            err(f"expected {ch!r}", pos)
        pos += 1

    def ident():
        nonlocal pos
        skip_ws()
        start = pos
        while pos < n and _is_ident_char(text[pos]):
            pos += 1
        if pos == start:
            err("expected an identifier", pos)
        return text[start:pos]

    def value():
        nonlocal pos
        skip_ws()
        if pos < n and text[pos] == "[":
            return struct()
        name = ident()
        if pos < n and text[pos] == "%":
            pos += 1
            uid = ident()
            if not uid.isdigit():
                err("instantiated atom needs a numeric tag", pos)
            return Inst(name, int(uid))
        if name[0].isupper():
            return Var(name)
        return name

    def struct():
        nonlocal pos
        expect("[")
        pairs = []
        skip_ws()
        if pos < n and text[pos] == "]":
            pos += 1
            return FeatStruct()
        while True:
            name = ident()
            if not (name[0].islower() or name[0].isdigit()):
                err(f"feature name must be lowercase: {name}", pos)
            expect("=")
            pairs.append((name, value()))
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            expect("]")
            return FeatStruct(pairs)

    result = struct()
    skip_ws()
    if pos != n:
        err("trailing input after structure", pos)
    return result
