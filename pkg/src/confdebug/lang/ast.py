"""AST for the MiniConf toy language.

Every node carries a stable integer id (assigned in pre-order after
parsing) and a source span as byte offsets into the original file.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Value = Union[int, bool, str]

# kind tags, used by the interpreter kernel for cheap dispatch
K_INT = 0
K_BOOL = 1
K_SYM = 2
K_VAR = 3
K_OPTION = 4
K_UNARY = 5
K_BINARY = 6
K_ASSIGN = 7
K_CALL = 8
K_IF = 9
K_REPEAT = 10
K_RETURN = 11
K_WORK = 12
K_PARAM = 13
K_FUNCTION = 14
K_PROGRAM = 15


@dataclass(frozen=True)
class Span:
    file: str
    start: int
    end: int


_NO_SPAN = Span("<none>", 0, 0)


@dataclass
class Node:
    kind: int = field(init=False, default=-1)
    node_id: int = field(init=False, default=-1)
    span: Span = field(init=False, default=_NO_SPAN)

    def children(self):
        return ()


# --- expressions ---------------------------------------------------------


@dataclass
class IntLit(Node):
    value: int

    def __post_init__(self):
        self.kind = K_INT

    def to_sexpr(self):
        return ("int", self.value)


@dataclass
class BoolLit(Node):
    value: bool

    def __post_init__(self):
        self.kind = K_BOOL

    def to_sexpr(self):
        return ("bool", self.value)


@dataclass
class SymbolLit(Node):
    name: str

    def __post_init__(self):
        self.kind = K_SYM

    def to_sexpr(self):
        return ("sym", self.name)


@dataclass
class Var(Node):
    name: str

    def __post_init__(self):
        self.kind = K_VAR

    def to_sexpr(self):
        return ("var", self.name)


@dataclass
class OptionLoad(Node):
    option: str

    def __post_init__(self):
        self.kind = K_OPTION

    def to_sexpr(self):
        return ("option", self.option)


@dataclass
class Unary(Node):
    op: str  # "-" or "!"
    operand: Node

    def __post_init__(self):
        self.kind = K_UNARY

    def children(self):
        return (self.operand,)

    def to_sexpr(self):
        return ("unary", self.op, self.operand.to_sexpr())


@dataclass
class Binary(Node):
    op: str  # + - * / % && || == != < <= > >=
    left: Node
    right: Node

    def __post_init__(self):
        self.kind = K_BINARY

    def children(self):
        return (self.left, self.right)

    def to_sexpr(self):
        return ("binary", self.op, self.left.to_sexpr(), self.right.to_sexpr())


# --- statements ----------------------------------------------------------


@dataclass
class Assign(Node):
    target: str
    expr: Node

    def __post_init__(self):
        self.kind = K_ASSIGN

    def children(self):
        return (self.expr,)

    def to_sexpr(self):
        return ("assign", self.target, self.expr.to_sexpr())


@dataclass
class CallStmt(Node):
    target: Optional[str]  # None for plain `f(...)`
    callee: str
    args: list

    def __post_init__(self):
        self.kind = K_CALL

    def children(self):
        return tuple(self.args)

    def to_sexpr(self):
        return ("call", self.target, self.callee,
                tuple(a.to_sexpr() for a in self.args))


@dataclass
class If(Node):
    cond: Node
    then_body: list
    else_body: list

    def __post_init__(self):
        self.kind = K_IF

    def children(self):
        return (self.cond, *self.then_body, *self.else_body)

    def to_sexpr(self):
        return ("if", self.cond.to_sexpr(),
                tuple(s.to_sexpr() for s in self.then_body),
                tuple(s.to_sexpr() for s in self.else_body))


@dataclass
class Repeat(Node):
    count: Node
    body: list

    def __post_init__(self):
        self.kind = K_REPEAT

    def children(self):
        return (self.count, *self.body)

    def to_sexpr(self):
        return ("repeat", self.count.to_sexpr(),
                tuple(s.to_sexpr() for s in self.body))


@dataclass
class Return(Node):
    expr: Optional[Node]

    def __post_init__(self):
        self.kind = K_RETURN

    def children(self):
        return (self.expr,) if self.expr is not None else ()

    def to_sexpr(self):
        return ("return", self.expr.to_sexpr() if self.expr else None)


@dataclass
class Work(Node):
    expr: Node

    def __post_init__(self):
        self.kind = K_WORK

    def children(self):
        return (self.expr,)

    def to_sexpr(self):
        return ("work", self.expr.to_sexpr())


# --- declarations --------------------------------------------------------


@dataclass
class Param(Node):
    name: str

    def __post_init__(self):
        self.kind = K_PARAM

    def to_sexpr(self):
        return ("param", self.name)


@dataclass
class Function(Node):
    name: str
    params: list
    body: list

    def __post_init__(self):
        self.kind = K_FUNCTION

    def children(self):
        return (*self.params, *self.body)

    def to_sexpr(self):
        return ("fn", self.name,
                tuple(p.to_sexpr() for p in self.params),
                tuple(s.to_sexpr() for s in self.body))


@dataclass(frozen=True)
class OptionDecl:
    """A declared configuration option.

    `values` is (False, True) for booleans or a tuple of symbol names
    for enumerations; `default` is a member of `values`.
    """
    name: str
    values: tuple
    default: Value

    @property
    def is_bool(self) -> bool:
        return self.values == (False, True)

    def to_sexpr(self):
        return ("optdecl", self.name, self.values, self.default)


@dataclass
class Program(Node):
    options: list  # of OptionDecl
    functions: list  # of Function
    entry: str
    source: str = ""
    file: str = "<string>"

    def __post_init__(self):
        self.kind = K_PROGRAM
        self._fn_index = None

    def children(self):
        return tuple(self.functions)

    def function(self, name: str) -> Function:
        if self._fn_index is None:
            self._fn_index = {f.name: f for f in self.functions}
        return self._fn_index[name]

    def option(self, name: str) -> OptionDecl:
        for o in self.options:
            if o.name == name:
                return o
        raise KeyError(name)

    def to_sexpr(self):
        return ("program",
                tuple(o.to_sexpr() for o in self.options),
                tuple(f.to_sexpr() for f in self.functions),
                self.entry)


def walk(node: Node):
    """Pre-order traversal of a node and all descendants."""
    yield node
    for child in node.children():
        yield from walk(child)


def assign_node_ids(program: Program) -> None:
    """Number every AST node in pre-order, starting at 0 for the program."""
    for i, node in enumerate(walk(program)):
        node.node_id = i


def node_index(program: Program) -> dict:
    """Map node_id -> node for the whole program."""
    return {n.node_id: n for n in walk(program)}


def enclosing_function(program: Program) -> dict:
    """Map node_id -> function name for every node inside a function."""
    owner = {}
    for fn in program.functions:
        for n in walk(fn):
            owner[n.node_id] = fn.name
    return owner
