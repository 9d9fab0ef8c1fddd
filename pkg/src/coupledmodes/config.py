"""Scenario files: ``key = value`` lines grouped under ``[section]`` headers.

Example::

    [scenario]
    kind = two-mode

    [time]
    t_start = 0
    t_end = 3.141592653589793
    n_steps = 3

    [two-mode]
    delta = 0
    lambda = 1
    alpha = 1
    beta = 0

Every diagnostic carries the line number and key it refers to.  The stdlib
``configparser`` does not keep line numbers, hence the small parser here.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .bath import StarBathSpec, build_star_bath
from .core import ModeSystem, as_amplitudes
from .oracle import FockBasisSpec

KINDS = ("two-mode", "general", "star-bath", "oracle-check")
REPEATABLE = {"couple"}

_SECTION = re.compile(r"^\[\s*([A-Za-z0-9_\-]+)\s*\]$")
_ROW = re.compile(r"^lambda_row_(\d+)$")


class ConfigError(Exception):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class ParseError(ConfigError):
    """The document is not well-formed."""


class ValidationError(ConfigError):
    """The document is well-formed but describes an invalid scenario."""


@dataclass(frozen=True)
class Entry:
    value: str
    line: int


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    kind: str
    t_start: float
    t_end: float
    n_steps: int
    system: ModeSystem
    alpha: np.ndarray
    two_mode: tuple[float, float] | None = None
    bath: StarBathSpec | None = None
    fock: FockBasisSpec | None = None
    fit_window: float | None = None

    def times(self) -> np.ndarray:
        """``n_steps`` equally spaced samples from ``t_start`` to ``t_end`` inclusive."""
        if self.n_steps == 1:
            return np.array([self.t_start])
        return np.linspace(self.t_start, self.t_end, self.n_steps)


def _tokenize(text: str) -> dict[str, dict[str, list[Entry]]]:
    sections: dict[str, dict[str, list[Entry]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = m.group(1).lower()
            if current in sections:
                raise ParseError(f"duplicate section [{current}]", line=lineno)
            sections[current] = {}
            continue
        if line.startswith("["):
            raise ParseError(f"malformed section header {line!r}", line=lineno)
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
        if current is None:
            raise ParseError("key outside of any [section]", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if not key:
            raise ParseError("empty key", line=lineno)
        if not value:
            raise ParseError("empty value", line=lineno, key=key)
        entries = sections[current].setdefault(key, [])
        if entries and key not in REPEATABLE:
            raise ParseError(f"duplicate key (first set on line {entries[0].line})", line=lineno, key=key)
        entries.append(Entry(value, lineno))
    return sections


class _Section:
    """Typed accessors over one section, tracking which keys were consumed."""

    def __init__(self, name: str, entries: dict[str, list[Entry]], line: int | None):
        self.name = name
        self.entries = entries
        self.line = line
        self.used: set[str] = set()

    def has(self, key: str) -> bool:
        return key in self.entries

    def entry(self, key: str) -> Entry:
        if key not in self.entries:
            raise ValidationError(f"missing required key in [{self.name}]", line=self.line, key=key)
        self.used.add(key)
        return self.entries[key][0]

    def all(self, key: str) -> list[Entry]:
        self.used.add(key)
        return self.entries.get(key, [])

    def real(self, key: str, default: float | None = None) -> float:
        if default is not None and not self.has(key):
            return default
        e = self.entry(key)
        return _real(e.value, e.line, key)

    def integer(self, key: str) -> int:
        e = self.entry(key)
        try:
            return int(e.value)
        except ValueError:
            raise ParseError(f"expected an integer, got {e.value!r}", line=e.line, key=key) from None

    def cplx(self, key: str) -> complex:
        e = self.entry(key)
        return _complex(e.value, e.line, key)

    def real_list(self, key: str) -> list[float]:
        e = self.entry(key)
        return [_real(v, e.line, key) for v in _split(e)]

    def complex_list(self, key: str) -> list[complex]:
        e = self.entry(key)
        return [_complex(v, e.line, key) for v in _split(e)]

    def check_unused(self):
        for key, entries in self.entries.items():
            if key not in self.used and not _ROW.match(key):
                raise ValidationError(f"unknown key in [{self.name}]", line=entries[0].line, key=key)


def _split(e: Entry) -> list[str]:
    return [v.strip() for v in e.value.split(",")]


def _real(text: str, line: int, key: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ParseError(f"expected a real number, got {text!r}", line=line, key=key) from None
    if not math.isfinite(x):
        raise ValidationError(f"value must be finite, got {text!r}", line=line, key=key)
    return x


def _complex(text: str, line: int, key: str) -> complex:
    cleaned = text.replace(" ", "").replace("i", "j")
    try:
        z = complex(cleaned)
    except ValueError:
        raise ParseError(f"expected a complex number such as 0.5+0.2i, got {text!r}", line=line, key=key) from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"value must be finite, got {text!r}", line=line, key=key)
    return z


def _coupling_matrix(sec: _Section, n: int) -> np.ndarray:
    c = np.zeros((n, n))
    rows = {int(_ROW.match(k).group(1)): k for k in sec.entries if _ROW.match(k)}
    triples = sec.all("couple")
    if rows and triples:
        raise ValidationError("use either lambda_row_i rows or couple triples, not both", line=triples[0].line, key="couple")
    if rows:
        for i in range(n):
            if i not in rows:
                raise ValidationError(f"missing coupling row {i}", line=sec.line, key=f"lambda_row_{i}")
        for i, key in rows.items():
            if i >= n:
                raise ValidationError(f"row index {i} out of range for {n} modes", line=sec.entries[key][0].line, key=key)
            values = sec.real_list(key)
            if len(values) != n:
                raise ValidationError(f"row has {len(values)} entries, expected {n}", line=sec.entries[key][0].line, key=key)
            c[i] = values
        for i in range(n):
            if c[i, i] != 0.0:
                e = sec.entries[rows[i]][0]
                raise ValidationError(f"diagonal coupling [{i}][{i}] must be 0", line=e.line, key=rows[i])
            for j in range(i + 1, n):
                if c[i, j] != c[j, i]:
                    e = sec.entries[rows[j]][0]
                    raise ValidationError(
                        f"coupling matrix not symmetric: [{i}][{j}]={c[i, j]:g} but [{j}][{i}]={c[j, i]:g}",
                        line=e.line,
                        key=rows[j],
                    )
    for e in triples:
        parts = _split(e)
        if len(parts) != 3:
            raise ParseError("couple needs 'i, j, value'", line=e.line, key="couple")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("couple indices must be integers", line=e.line, key="couple") from None
        value = _real(parts[2], e.line, "couple")
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ValidationError(f"couple indices ({i}, {j}) invalid for {n} modes", line=e.line, key="couple")
        if c[i, j] != 0.0 and c[i, j] != value:
            raise ValidationError(f"pair ({i}, {j}) given twice with different values", line=e.line, key="couple")
        c[i, j] = c[j, i] = value
    return c


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document.

    Raises:
        ParseError: malformed line or value.
        ValidationError: well-formed but inconsistent scenario.
    """
    raw = _tokenize(text)
    header_lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = _SECTION.match(line.split("#", 1)[0].strip())
        if m:
            header_lines[m.group(1).lower()] = lineno

    def section(name: str, required: bool = True) -> _Section | None:
        if name not in raw:
            if required:
                raise ValidationError(f"missing section [{name}]")
            return None
        return _Section(name, raw[name], header_lines.get(name))

    scen = section("scenario")
    kind_entry = scen.entry("kind")
    kind = kind_entry.value.lower()
    if kind not in KINDS:
        raise ValidationError(f"kind must be one of {', '.join(KINDS)}, got {kind_entry.value!r}", line=kind_entry.line, key="kind")
    scen.check_unused()

    tsec = section("time")
    t_start = tsec.real("t_start", default=0.0)
    t_end = tsec.real("t_end")
    n_steps = tsec.integer("n_steps")
    if t_end <= t_start:
        raise ValidationError(f"t_end ({t_end:g}) must exceed t_start ({t_start:g})", line=tsec.entry("t_end").line, key="t_end")
    if n_steps < 1:
        raise ValidationError("n_steps must be >= 1", line=tsec.entry("n_steps").line, key="n_steps")
    tsec.check_unused()

    sections_used = {"scenario", "time"}
    kw: dict = {}

    def guarded(sec: _Section, key: str, build):
        try:
            return build()
        except ConfigError:
            raise
        except ValueError as exc:
            line = sec.entries[key][0].line if sec.has(key) else sec.line
            raise ValidationError(str(exc), line=line, key=key) from None

    def read_two_mode(sec: _Section):
        delta = sec.real("delta")
        lam = sec.real("lambda")
        alpha = sec.cplx("alpha")
        beta = sec.cplx("beta") if sec.has("beta") else 0j
        sec.check_unused()
        kw["two_mode"] = (delta, lam)
        return ModeSystem.two_mode(delta, lam), as_amplitudes([alpha, beta])

    def read_general(sec: _Section):
        omega = sec.real_list("omega")
        n = len(omega)
        alpha = sec.complex_list("alpha") if sec.has("alpha") else [0j] * n
        if len(alpha) != n:
            raise ValidationError(f"alpha has {len(alpha)} entries but omega has {n}", line=sec.entry("alpha").line, key="alpha")
        c = _coupling_matrix(sec, n)
        sec.check_unused()
        return guarded(sec, "omega", lambda: ModeSystem(omega, c)), as_amplitudes(alpha)

    if kind == "two-mode":
        sec = section("two-mode")
        sections_used.add("two-mode")
        system, alpha = read_two_mode(sec)
    elif kind == "general":
        sec = section("general")
        sections_used.add("general")
        system, alpha = read_general(sec)
    elif kind == "star-bath":
        sec = section("star-bath")
        sections_used.add("star-bath")
        spec = guarded(
            sec,
            "n_bath",
            lambda: StarBathSpec(
                omega_sys=sec.real("omega_sys"),
                n_bath=sec.integer("n_bath"),
                bandwidth=sec.real("bandwidth"),
                coupling=sec.real("coupling"),
                alpha0=sec.cplx("alpha0") if sec.has("alpha0") else 1.0,
            ),
        )
        if sec.has("fit_window"):
            kw["fit_window"] = sec.real("fit_window")
            if kw["fit_window"] <= 0.0:
                raise ValidationError("fit_window must be positive", line=sec.entry("fit_window").line, key="fit_window")
        sec.check_unused()
        kw["bath"] = spec
        system, alpha = build_star_bath(spec)
    else:
        present = [name for name in ("two-mode", "general") if name in raw]
        if len(present) != 1:
            raise ValidationError("oracle-check needs exactly one of [two-mode] or [general]")
        sections_used.add(present[0])
        sec = section(present[0])
        system, alpha = read_two_mode(sec) if present[0] == "two-mode" else read_general(sec)
        osec = section("oracle")
        sections_used.add("oracle")
        kw["fock"] = guarded(osec, "n_max", lambda: FockBasisSpec(n_modes=system.n, n_max=osec.integer("n_max")))
        osec.check_unused()

    for name in raw:
        if name not in sections_used:
            raise ValidationError(f"section [{name}] is not used by kind '{kind}'", line=header_lines.get(name))

    return ScenarioConfig(kind=kind, t_start=t_start, t_end=t_end, n_steps=n_steps, system=system, alpha=alpha, **kw)
