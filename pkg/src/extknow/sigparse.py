"""Parse API prototypes and enumerate emulated call usages.

Prototype notation follows library reference pages: bare names are
required, names inside (possibly nested) square brackets are optional
positionals, and ``name=default`` is a keyword argument::

    >>> sig = parse_signature("collections.deque([iterable[, maxlen]])", "constructor")
    >>> [u.code for u in enumerate_usages(sig)]
    ['collections.deque()', 'collections.deque(iterable)', 'collections.deque(iterable, maxlen)']
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Optional

from extknow.errors import MalformedSignature, MissingClassName

log = logging.getLogger(__name__)

REQUIRED = "required"
OPTIONAL = "optional_positional"
KEYWORD = "keyword"

ENTRY_KINDS = ("function", "constructor", "method")

MAX_USAGES = 10

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_DOTTED = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*\Z")
_CLOSERS = {"(": ")", "[": "]", "{": "}"}


@dataclass(frozen=True)
class ArgSpec:
    name: str
    kind: str
    position: int
    default_text: Optional[str] = None

    def __post_init__(self):
        if not _IDENT.match(self.name):
            raise ValueError(f"not an identifier: {self.name!r}")
        if (self.default_text is not None) != (self.kind == KEYWORD):
            raise ValueError("default_text is present iff kind is keyword")


@dataclass(frozen=True)
class Signature:
    qualified_name: str
    entry_kind: str
    args: tuple[ArgSpec, ...]
    class_name: Optional[str] = None

    def names(self, kind: Optional[str] = None) -> list[str]:
        return [a.name for a in self.args if kind is None or a.kind == kind]

    @property
    def required(self) -> list[str]:
        return self.names(REQUIRED)

    @property
    def optional_positional(self) -> list[str]:
        return self.names(OPTIONAL)

    @property
    def keyword(self) -> list[str]:
        return self.names(KEYWORD)


@dataclass(frozen=True)
class UsageSnippet:
    code: str
    included_args: tuple[str, ...]
    optional_count: int


def _split_prototype(text: str) -> tuple[str, str]:
    text = text.strip()
    if text.startswith("class "):
        text = text[len("class "):].lstrip()
    open_at = text.find("(")
    if open_at < 0 or not text.endswith(")"):
        raise MalformedSignature(f"no argument list in {text!r}")
    name = text[:open_at].strip()
    if not _DOTTED.match(name):
        raise MalformedSignature(f"bad callable name {name!r}")
    return name, text[open_at + 1:-1]


def _scan_args(body: str) -> list[tuple[str, int]]:
    """Split an argument list into ``(token, bracket_depth)`` items.

    Commas and square brackets at the top level are structure; anything
    after ``=`` is a default expression, scanned with its own nesting and
    string-quote tracking so ``sep=', '`` or ``x=[]`` stay intact.
    """
    items: list[tuple[str, int]] = []
    depth = 0
    buf: list[str] = []
    nest: list[str] = []  # open brackets inside a default expression
    quote: Optional[str] = None
    in_default = False
    prev = "start"  # last structural delimiter seen
    # bracket depth at which the current token began
    token_depth = 0
    i = 0
    n = len(body)

    def flush(delim: str):
        nonlocal buf, in_default, prev, token_depth
        token = "".join(buf).strip()
        if token:
            items.append((token, token_depth))
        elif delim == "," and prev in ("start", ","):
            raise MalformedSignature(f"empty argument name in ({body})")
        elif delim == "end" and prev == ",":
            raise MalformedSignature(f"trailing comma in ({body})")
        elif delim == "]" and prev == "[":
            raise MalformedSignature(f"empty optional group in ({body})")
        buf = []
        in_default = False
        prev = delim
        token_depth = depth

    while i < n:
        ch = body[i]
        if quote is not None:
            buf.append(ch)
            if ch == "\\" and i + 1 < n:
                buf.append(body[i + 1])
                i += 2
                continue
            if ch == quote:
                quote = None
            i += 1
            continue
        if in_default:
            if ch in "'\"":
                quote = ch
                buf.append(ch)
            elif ch == "[" and not nest and body[i + 1:].lstrip().startswith(","):
                # "key=None[, more]": a subscript never starts with a comma
                flush("[")
                depth += 1
                token_depth = depth
            elif ch in _CLOSERS:
                nest.append(_CLOSERS[ch])
                buf.append(ch)
            elif nest and ch == nest[-1]:
                nest.pop()
                buf.append(ch)
            elif not nest and ch in ",]":
                flush(ch)
                if ch == "]":
                    depth -= 1
                    if depth < 0:
                        raise MalformedSignature(f"unbalanced ']' in ({body})")
                    token_depth = depth
            elif ch in ")}" or (ch == "]" and nest):
                raise MalformedSignature(f"unbalanced {ch!r} in ({body})")
            else:
                buf.append(ch)
            i += 1
            continue
        if ch == "[":
            flush("[")
            depth += 1
            token_depth = depth
        elif ch == "]":
            flush("]")
            depth -= 1
            if depth < 0:
                raise MalformedSignature(f"unbalanced ']' in ({body})")
            token_depth = depth
        elif ch == ",":
            flush(",")
        elif ch == "=":
            in_default = True
            buf.append(ch)
        elif ch in "(){}":
            raise MalformedSignature(f"unexpected {ch!r} in ({body})")
        else:
            buf.append(ch)
        i += 1
    if quote is not None or nest:
        raise MalformedSignature(f"unterminated default in ({body})")
    if depth != 0:
        raise MalformedSignature(f"unbalanced '[' in ({body})")
    flush("end")
    return items


def parse_signature(text: str, entry_kind: str = "function",
                    class_name: Optional[str] = None) -> Signature:
    """Parse one prototype such as ``heapq.nlargest(n, iterable, key=None)``.

    Variadic markers (``*args``, ``**kw``, bare ``*`` and ``/``) are dropped
    with a warning. Raises :class:`MalformedSignature` on unbalanced
    brackets, empty or invalid names, duplicates, or a required argument
    following an optional positional one.
    """
    if entry_kind not in ENTRY_KINDS:
        raise ValueError(f"unknown entry kind {entry_kind!r}")
    name, body = _split_prototype(text)
    if entry_kind == "constructor":
        last = name.rsplit(".", 1)[-1]
        if class_name is None:
            class_name = last
        elif class_name.rsplit(".", 1)[-1] != last:
            raise MalformedSignature(
                f"constructor {name!r} does not match class {class_name!r}")
        else:
            class_name = last
    elif class_name is not None:
        class_name = class_name.rsplit(".", 1)[-1]

    args: list[ArgSpec] = []
    seen: set[str] = set()
    saw_optional = False
    for token, depth in _scan_args(body):
        if token in ("*", "/", "...") or token.startswith("*"):
            log.warning("dropping variadic marker %r from %s", token, name)
            continue
        if "=" in token:
            arg_name, default = token.split("=", 1)
            arg_name, default = arg_name.strip(), default.strip()
            if not default:
                raise MalformedSignature(f"keyword {arg_name!r} has no default in {name}")
            kind = KEYWORD
        else:
            arg_name, default = token, None
            kind = OPTIONAL if depth > 0 else REQUIRED
        if not _IDENT.match(arg_name):
            raise MalformedSignature(f"bad argument name {arg_name!r} in {name}")
        if arg_name in seen:
            raise MalformedSignature(f"duplicate argument {arg_name!r} in {name}")
        if kind == REQUIRED and saw_optional:
            raise MalformedSignature(f"required {arg_name!r} after optional args in {name}")
        saw_optional = saw_optional or kind == OPTIONAL
        seen.add(arg_name)
        args.append(ArgSpec(arg_name, kind, len(args), default))
    return Signature(name, entry_kind, tuple(args), class_name)


def _call(name: str, rendered: list[str]) -> str:
    return f"{name}({', '.join(rendered)})"


def enumerate_usages(sig: Signature, limit: int = MAX_USAGES) -> list[UsageSnippet]:
    required = sig.required
    optional = sig.optional_positional
    keywords = sig.keyword

    usages: dict[str, UsageSnippet] = {}
    for p in range(len(optional) + 1):
        for r in range(len(keywords) + 1):
            for kw in itertools.combinations(keywords, r):
                # positionals must precede keywords in a call
                included = (*required, *optional[:p], *kw)
                rendered = [*required, *optional[:p], *(f"{a}={a}" for a in kw)]
                code = _call(sig.qualified_name, rendered)
                usages.setdefault(code, UsageSnippet(code, included, p + r))
    ordered = sorted(usages.values(), key=lambda u: (u.optional_count, u.included_args))
    return ordered[:limit]


def variable_name(class_name: str, taken: tuple[str, ...] = ()) -> str:
    """Lower-cased first character of the class, suffixed on collision."""
    var = class_name[0].lower()
    if var in taken:
        var += "0"
    return var


def render_usage(sig: Signature, usage: UsageSnippet) -> str:
    if sig.entry_kind == "function":
        return usage.code
    if not sig.class_name:
        raise MissingClassName(f"{sig.entry_kind} {sig.qualified_name} has no class name")
    var = variable_name(sig.class_name, usage.included_args)
    call = usage.code[len(sig.qualified_name):]
    if sig.entry_kind == "constructor":
        return f"{var} = {sig.qualified_name}{call}"
    method = sig.qualified_name.rsplit(".", 1)[-1]
    return f"{var}.{method}{call}"
