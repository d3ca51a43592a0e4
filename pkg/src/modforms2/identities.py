"""Registry of built-in identities and their exact verification."""

from __future__ import annotations

import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .dsl import Environment, EvalError, IdentityReport, Mismatch, ParseError, check_identity, parse
from .series import SeriesError

__all__ = [
    "HEADROOM",
    "Identity",
    "IdentityReport",
    "Mismatch",
    "load_registry",
    "parse_identity_file",
    "registry",
    "verify",
    "verify_all",
]

# extra powers of q in the evaluation environment beyond the requested order
HEADROOM = 8

_LINE = re.compile(r"^\s*(?P<id>[A-Za-z][A-Za-z0-9_]*)\s*::=\s*(?P<lhs>.+?)\s*==\s*(?P<rhs>.+?)\s*$")


@dataclass(frozen=True)
class Identity:
    id: str
    lhs: str
    rhs: str
    description: str = ""
    conversion: str = ""

    def text(self) -> str:
        return f"{self.id} ::= {self.lhs} == {self.rhs}"


def parse_identity_file(text: str) -> list[Identity]:
    """Parse ``ID ::= lhs == rhs`` lines; ``#:`` / ``#~`` comments attach to the next entry."""
    out: list[Identity] = []
    seen: set[str] = set()
    desc: list[str] = []
    conv: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            desc, conv = [], []
            continue
        if line.startswith("#:"):
            desc.append(line[2:].strip())
            continue
        if line.startswith("#~"):
            conv.append(line[2:].strip())
            continue
        if line.startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'ID ::= lhs == rhs'")
        ident = m["id"]
        if ident in seen:
            raise ValueError(f"line {lineno}: duplicate identity id {ident!r}")
        seen.add(ident)
        for side in ("lhs", "rhs"):
            try:
                parse(m[side])
            except ParseError as err:
                raise ValueError(f"line {lineno} ({ident} {side}): {err}") from err
        out.append(Identity(ident, m["lhs"], m["rhs"], " ".join(desc), " ".join(conv)))
        desc, conv = [], []
    return out


def load_registry(path: str | Path | None = None) -> list[Identity]:
    if path is None:
        text = resources.files(__package__).joinpath("identities.txt").read_text()
    else:
        text = Path(path).read_text()
    return parse_identity_file(text)


@lru_cache(maxsize=1)
def _builtin() -> tuple[Identity, ...]:
    return tuple(load_registry())


def registry() -> dict[str, Identity]:
    return {i.id: i for i in _builtin()}


def environment(order: int) -> Environment:
    return Environment(order + HEADROOM)


def verify(ident: str | Identity, order: int = 64, env: Environment | None = None) -> IdentityReport:
    """Check one identity exactly through q**order.

    Unknown ids raise KeyError. Evaluation failures (for example a division
    that runs out of precision) come back as status ``"error"``.
    """
    if isinstance(ident, str):
        ident = registry()[ident]
    env = env or environment(order)
    t0 = time.perf_counter()
    try:
        report = check_identity(ident.lhs, ident.rhs, env, order, ident.id)
    except (EvalError, SeriesError) as err:
        report = IdentityReport(ident.id, order, "error", message=str(err))
    report.ms = 1000 * (time.perf_counter() - t0)
    return report


def verify_all(
    order: int = 64,
    ids: list[str] | None = None,
    env: Environment | None = None,
    workers: int = 1,
) -> list[IdentityReport]:
    """Verify registry entries, returned in registry order."""
    reg = registry()
    chosen = [reg[i] for i in ids] if ids else list(reg.values())
    env = env or environment(order)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda i: verify(i, order, env), chosen))
    return [verify(i, order, env) for i in chosen]
