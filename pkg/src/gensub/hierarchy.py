"""Class declarations: the DSL, the class table, and the subclassing poset.

Grammar::

    table    := decl* ;
    decl     := "class" NAME params? ("extends" NAME)? ";"? ;
    params   := "<" VAR bound* ">" ;
    bound    := ("extends" typeexp) | ("super" typeexp) ;
    typeexp  := NAME ("<" (VAR | typeexp | interval) ">")? ;
    interval := "[" typeexp "," typeexp "]" ;

Outside declarations (queries, the validity command) type expressions also
accept wildcard arguments ``?``, ``? extends T``, ``? super T``, ``? <: T``,
``T <: ?`` and the cofree form ``C<!>``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .poset import BoundedPoset, Poset
from .terms import (
    ANY,
    NULL,
    OBJECT,
    Applied,
    ArgKind,
    Cofree,
    PlainClass,
    TypeArgument,
    TypeVar,
    class_names,
    extends,
    interval,
    super_,
    exact,
)

BUILTINS = ("Object", "Null")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class DiagnosticError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class ClassTableError(DiagnosticError):
    pass


class TermSyntaxError(DiagnosticError):
    pass


# -- lexer ----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|//[^\n]*)
  | (?P<nl>\n)
  | (?P<name>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<op><:|⊑|<=|[<>\[\],;?!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "op", "eof"
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise DiagnosticError(
                [Diagnostic(line, pos - line_start + 1, f"unexpected character {source[pos]!r}")]
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, source: str, error=DiagnosticError):
        self.error = error
        try:
            self.tokens = tokenize(source)
        except DiagnosticError as exc:
            raise error(exc.diagnostics) from None
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise self.error([Diagnostic(tok.line, tok.column, message)])

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def accept(self, text) -> Token | None:
        if self.at(text):
            tok = self.tok
            self.pos += 1
            return tok
        return None

    def expect(self, text) -> Token:
        tok = self.accept(text)
        if tok is None:
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        return tok

    def name(self, what="name") -> Token:
        tok = self.tok
        if tok.kind != "name" or tok.text in ("class", "extends", "super"):
            self.fail(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.pos += 1
        return tok

    # type expressions -----------------------------------------------------

    def typeexp(self, var: str | None = None, wildcards: bool = False):
        tok = self.name("type name")
        if var is not None and tok.text == var:
            if self.at("<"):
                self.fail(f"type variable {var} cannot take arguments")
            return TypeVar(var)
        if not self.accept("<"):
            return PlainClass(tok.text)
        if wildcards and self.accept("!"):
            self.expect(">")
            return Cofree(tok.text)
        arg = self.argument(var, wildcards)
        self.expect(">")
        return Applied(tok.text, arg)

    def argument(self, var: str | None = None, wildcards: bool = False) -> TypeArgument:
        if self.accept("["):
            lo = self.typeexp(var, wildcards)
            self.expect(",")
            hi = self.typeexp(var, wildcards)
            self.expect("]")
            return interval(lo, hi)
        if self.at("?"):
            if not wildcards:
                self.fail("wildcards are not allowed here; use an interval [S,T]")
            self.pos += 1
            if self.accept("extends") or self.accept("<:"):
                return extends(self.typeexp(var, wildcards))
            if self.accept("super"):
                return super_(self.typeexp(var, wildcards))
            return ANY
        t = self.typeexp(var, wildcards)
        if wildcards and self.at("<:") and self.peek().text == "?":
            self.pos += 2
            return super_(t)
        return exact(t)


# -- class table ----------------------------------------------------------


@dataclass(frozen=True)
class ClassDecl:
    name: str
    superclass: str = "Object"
    param: str | None = None
    lower_bound: object = NULL
    upper_bound: object = OBJECT
    line: int = field(default=0, compare=False)

    @property
    def arity(self) -> int:
        return 0 if self.param is None else 1

    def to_source(self) -> str:
        head = f"class {self.name}"
        if self.param is not None:
            bounds = ""
            if self.upper_bound != OBJECT:
                bounds += f" extends {format_bound(self.upper_bound)}"
            if self.lower_bound != NULL:
                bounds += f" super {format_bound(self.lower_bound)}"
            head += f"<{self.param}{bounds}>"
        return f"{head} extends {self.superclass};"


def format_bound(expr) -> str:
    """Print a bound expression in DSL form (intervals as ``[S,T]``)."""
    if isinstance(expr, Applied):
        a = expr.arg
        if a.kind is ArgKind.EXACT:
            inner = format_bound(a.lower)
        else:
            inner = f"[{format_bound(a.lower)},{format_bound(a.upper)}]"
        return f"{expr.name}<{inner}>"
    return str(expr)


class ClassTable:
    """A validated set of class declarations plus the implicit Object and Null."""

    def __init__(self, decls=()):
        self.decls: tuple[ClassDecl, ...] = tuple(decls)
        diags = validate_decls(self.decls)
        if diags:
            raise ClassTableError(diags)
        self._by_name = {d.name: d for d in self.decls}
        self._up: dict[str, frozenset[str]] = {}
        for name in self.class_names:
            self._up[name] = frozenset(self._ancestors(name))

    def _ancestors(self, name):
        if name == "Null":
            return set(self.class_names)
        seen = {name}
        while name != "Object":
            name = self._by_name[name].superclass
            seen.add(name)
        return seen

    @property
    def class_names(self) -> tuple[str, ...]:
        return ("Object", *(d.name for d in self.decls), "Null")

    @property
    def generic_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.decls if d.param is not None)

    @property
    def plain_names(self) -> tuple[str, ...]:
        return tuple(n for n in self.class_names if not self.is_generic(n))

    def __contains__(self, name):
        return name in self._up

    def __eq__(self, other):
        return isinstance(other, ClassTable) and self.decls == other.decls

    def __repr__(self):
        return f"ClassTable({[d.name for d in self.decls]})"

    def decl(self, name) -> ClassDecl:
        return self._by_name[name]

    def is_generic(self, name) -> bool:
        d = self._by_name.get(name)
        return d is not None and d.param is not None

    def arity(self, name) -> int:
        d = self._by_name.get(name)
        return 0 if d is None else d.arity

    def bounds(self, name):
        d = self._by_name[name]
        return d.lower_bound, d.upper_bound

    def subclass(self, a: str, b: str) -> bool:
        """``a`` is a (reflexive, transitive) subclass of ``b``."""
        return b in self._up[a]

    def superclasses(self, name) -> frozenset[str]:
        return self._up[name]

    def to_source(self) -> str:
        return "\n".join(d.to_source() for d in self.decls) + "\n"

    def to_json(self) -> dict:
        return {
            "classes": [
                {
                    "name": d.name,
                    "param": d.param,
                    "superclass": d.superclass,
                    "lower_bound": format_bound(d.lower_bound),
                    "upper_bound": format_bound(d.upper_bound),
                }
                for d in self.decls
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassTable":
        decls = []
        diags = []
        for i, c in enumerate(data.get("classes", []), start=1):
            param = c.get("param")
            try:
                lower = _parse_bound(c.get("lower_bound") or "Null", param)
                upper = _parse_bound(c.get("upper_bound") or "Object", param)
            except DiagnosticError as exc:
                diags += [Diagnostic(i, d.column, f"{c.get('name')}: {d.message}") for d in exc.diagnostics]
                continue
            decls.append(ClassDecl(c["name"], c.get("superclass") or "Object", param, lower, upper, line=i))
        if diags:
            raise ClassTableError(diags)
        return cls(decls)


def _parse_bound(text: str, param):
    p = _Parser(text)
    expr = p.typeexp(var=param)
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after bound")
    return expr


def validate_decls(decls) -> list[Diagnostic]:
    diags = []
    by_name: dict[str, ClassDecl] = {}
    for d in decls:
        if d.name in BUILTINS:
            diags.append(Diagnostic(d.line, 1, f"class {d.name} is built in and cannot be declared"))
        elif d.name in by_name:
            diags.append(Diagnostic(d.line, 1, f"duplicate declaration of class {d.name}"))
        else:
            by_name[d.name] = d
    arity = {n: d.arity for n, d in by_name.items()}
    arity.update(Object=0, Null=0)
    for d in by_name.values():
        if d.superclass == "Null":
            diags.append(Diagnostic(d.line, 1, f"class {d.name} cannot extend Null"))
        elif d.superclass not in arity:
            diags.append(Diagnostic(d.line, 1, f"class {d.name} extends unknown class {d.superclass}"))
        elif d.param is None and arity[d.superclass] == 1:
            diags.append(Diagnostic(
                d.line, 1,
                f"non-generic class {d.name} cannot extend generic class {d.superclass}",
            ))
        if d.param is None and (d.lower_bound != NULL or d.upper_bound != OBJECT):
            diags.append(Diagnostic(d.line, 1, f"non-generic class {d.name} cannot declare bounds"))
        for which, bound in (("lower", d.lower_bound), ("upper", d.upper_bound)):
            diags += _check_bound(d, which, bound, arity)
    # cycles, only along known superclasses
    state: dict[str, int] = {}
    for start in by_name:
        path = []
        n = start
        while n in by_name and state.get(n) is None:
            state[n] = 1
            path.append(n)
            n = by_name[n].superclass
        if n in by_name and state.get(n) == 1:
            cyc = path[path.index(n):] + [n]
            diags.append(Diagnostic(by_name[n].line, 1, "cyclic subclassing: " + " -> ".join(cyc)))
        for p in path:
            state[p] = 2
    return diags


def _check_bound(d: ClassDecl, which, expr, arity) -> list[Diagnostic]:
    out = []

    def walk(e):
        if isinstance(e, TypeVar):
            if e.name != d.param:
                out.append(Diagnostic(d.line, 1, f"{which} bound of {d.name}: unknown variable {e.name}"))
            return
        if isinstance(e, Cofree):
            out.append(Diagnostic(d.line, 1, f"{which} bound of {d.name}: cofree types not allowed in bounds"))
            return
        if e.name not in arity:
            out.append(Diagnostic(d.line, 1, f"{which} bound of {d.name}: unknown class {e.name}"))
            return
        want = arity[e.name]
        got = 1 if isinstance(e, Applied) else 0
        if want != got:
            out.append(Diagnostic(
                d.line, 1,
                f"{which} bound of {d.name}: arity mismatch, {e.name} takes {want} argument(s), given {got}",
            ))
        if isinstance(e, Applied):
            walk(e.arg.lower)
            walk(e.arg.upper)

    walk(expr)
    return out


def parse_class_table(source: str) -> ClassTable:
    """Parse DSL text into a validated ``ClassTable``.

    Raises ``ClassTableError`` whose ``diagnostics`` carry line numbers.
    """
    p = _Parser(source, ClassTableError)
    decls = []
    while p.tok.kind != "eof":
        kw = p.tok
        if kw.text != "class":
            p.fail(f"expected 'class', found {kw.text!r}")
        p.pos += 1
        name = p.name("class name")
        param = None
        lower, upper = NULL, OBJECT
        if p.accept("<"):
            param = p.name("type variable").text
            seen = set()
            while p.at("extends") or p.at("super"):
                kind = p.tok
                p.pos += 1
                if kind.text in seen:
                    p.fail(f"duplicate '{kind.text}' bound on {param}", kind)
                seen.add(kind.text)
                expr = p.typeexp(var=param)
                if kind.text == "extends":
                    upper = expr
                else:
                    lower = expr
            p.expect(">")
        superclass = "Object"
        if p.accept("extends"):
            superclass = p.name("superclass name").text
            if p.at("<"):
                p.fail(f"superclass arguments are not supported; write 'extends {superclass}'")
        p.accept(";")
        if name.text == "Object" and param is None and superclass == "Object":
            continue  # explicit "class Object" is allowed and ignored
        decls.append(ClassDecl(name.text, superclass, param, lower, upper, line=name.line))
    if not decls and not re.search(r"\bclass\b", source):
        raise ClassTableError([Diagnostic(1, 1, "no class declarations")])
    return ClassTable(decls)


def load_class_table(path) -> ClassTable:
    """Read a DSL file, or a JSON mirror when the text starts with ``{``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ClassTableError([Diagnostic(exc.lineno, exc.colno, exc.msg)]) from None
        return ClassTable.from_json(data)
    return parse_class_table(text)


# -- terms from text ------------------------------------------------------


def parse_term(text: str):
    p = _Parser(text, TermSyntaxError)
    t = p.typeexp(wildcards=True)
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after type")
    return t


def parse_argument(text: str) -> TypeArgument:
    p = _Parser(text, TermSyntaxError)
    a = p.argument(wildcards=True)
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after type argument")
    return a


def parse_query(text: str):
    """Parse ``"A <: B"`` (subtyping) or ``"A ⊑ B"`` / ``"A <= B"`` (containment).

    Returns ``(op, left, right)`` with op ``"<:"`` or ``"⊑"``.
    """
    p = _Parser(text, TermSyntaxError)
    # containment queries are told apart by their operator, so try subtyping first
    start = p.pos
    try:
        left = p.typeexp(wildcards=True)
        if p.accept("<:"):
            right = p.typeexp(wildcards=True)
            if p.tok.kind == "eof":
                return "<:", left, right
    except TermSyntaxError:
        pass
    p.pos = start
    left = p.argument(wildcards=True)
    if not (p.accept("⊑") or p.accept("<=")):
        p.fail("expected '<:' or '⊑' between the two sides")
    right = p.argument(wildcards=True)
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r}")
    return "⊑", left, right


def admissibility_errors(table: ClassTable, t, allow_cofree: bool = True) -> list[str]:
    """Why ``t`` is not admittable over ``table``; empty when it is."""
    errs = []
    if isinstance(t, TypeVar):
        return [f"type variable {t.name} in a ground type"]
    for name in sorted(class_names(t)):
        if name not in table:
            errs.append(f"unknown class {name}")
    if errs:
        return errs

    def walk(e):
        if isinstance(e, TypeVar):
            errs.append(f"type variable {e.name} in a ground type")
        elif isinstance(e, PlainClass):
            if table.is_generic(e.name):
                errs.append(f"generic class {e.name} used without an argument")
        elif isinstance(e, Cofree):
            if not table.is_generic(e.name):
                errs.append(f"{e.name}<!>: class {e.name} is not generic")
            elif not allow_cofree:
                errs.append(f"{e.name}<!>: cofree types are disabled")
        else:
            if not table.is_generic(e.name):
                errs.append(f"class {e.name} is not a generic class and takes no arguments")
            walk(e.arg.lower)
            walk(e.arg.upper)

    walk(t)
    return errs


# -- the subclassing poset ------------------------------------------------


def subclassing_poset(table: ClassTable) -> tuple[BoundedPoset, frozenset[str]]:
    """The poset of classes (ids are class names) and the set of generic classes.

    Covers are the declared superclass edges plus ``Null`` below every class
    that has no declared subclass.
    """
    names = table.class_names
    edges = [(d.name, d.superclass) for d in table.decls]
    has_sub = {d.superclass for d in table.decls}
    leaves = [n for n in names if n not in has_sub and n != "Null"]
    edges += [("Null", n) for n in leaves]
    p = Poset(names, edges, labels={n: PlainClass(n) for n in names})
    return BoundedPoset.of(p), frozenset(table.generic_names)


SAMPLE_SOURCE = """\
// the running example
class Object;
class Number extends Object;
class Integer extends Number;
class String extends Object;
class List<X> extends Object;
class LinkedList<X> extends List;
class Enum<X extends Enum<X>> extends Object;
"""


def sample_table() -> ClassTable:
    return parse_class_table(SAMPLE_SOURCE)
