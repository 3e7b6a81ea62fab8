"""Positioned diagnostics and the exceptions shared across the workbench."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceLoc:
    file: str = "<string>"
    line: int = 0
    col: int = 0

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    loc: SourceLoc = field(default_factory=SourceLoc)

    def __str__(self):
        return f"{self.loc}: {self.severity}: {self.message}"

    def to_json_dict(self):
        return {
            "severity": self.severity,
            "message": self.message,
            "file": self.loc.file,
            "line": self.loc.line,
            "col": self.loc.col,
        }


class LoadError(Exception):
    """Raised when a source file fails to load; loading is atomic."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class EngineError(Exception):
    """A parse engine refused to run or was misconfigured."""


class LeftRecursionError(EngineError):
    """The top-down engine refuses grammars with left-recursion findings."""

    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__(
            "grammar has left-recursion errors: "
            + "; ".join("->".join(f.witness) for f in self.findings)
        )


class DepthGuardExceeded(EngineError):
    """The top-down engine exceeded its derivation depth bound."""


class ParseAborted(Exception):
    """A parse session was aborted through trace control."""


class InterfaceEvalError(Exception):
    """A lexicon interface rule copied a feature the entry does not have."""

    def __init__(self, rule_name, feature, loc):
        self.rule_name = rule_name
        self.feature = feature
        self.loc = loc
        super().__init__(
            f"{loc}: interface rule {rule_name!r} copies #{feature} "
            f"but the entry has no {feature!r} feature"
        )
