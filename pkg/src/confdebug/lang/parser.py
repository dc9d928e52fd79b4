"""Recursive-descent parser and canonical printer for MiniConf.

Grammar (see docs/grammar.ebnf):

    program   = { option_decl } { function } ;
    option_decl = "option" IDENT ( "bool" | "enum" "{" IDENT { "," IDENT } "}" )
                  "default" value ";" ;
    function  = "fn" IDENT "(" [ IDENT { "," IDENT } ] ")" block ;
    block     = "{" { statement } "}" ;

Statements: assignment, call (optionally `x = f(...)`), if/else, bounded
`repeat`, `return`, and `work(expr)`. Expressions: int/bool/symbol
literals, variables, `option(NAME)`, unary -/!, and the usual binary
operators. Enum values are written as symbols, e.g. `:fast`.
"""
from __future__ import annotations

import re

from ..errors import ParseError, ValidationError
from . import ast

KEYWORDS = {
    "option", "bool", "enum", "default", "fn", "if", "else",
    "repeat", "return", "work", "true", "false",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+|//[^\n]*)
    | (?P<int>\d+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<symbol>:[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"[^"\n]*")
    | (?P<punct>&&|\|\||==|!=|<=|>=|[-+*/%(){},;=<>!])
    """,
    re.VERBOSE,
)


class Token:
    __slots__ = ("type", "text", "pos")

    def __init__(self, type_: str, text: str, pos: int):
        self.type = type_
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"Token({self.type!r}, {self.text!r}, {self.pos})"


def _line_col(source: str, pos: int):
    line = source.count("\n", 0, pos) + 1
    col = pos - (source.rfind("\n", 0, pos) + 1) + 1
    return line, col


def tokenize(source: str, file: str = "<string>"):
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            line, col = _line_col(source, pos)
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        if m.lastgroup != "ws":
            text = m.group()
            type_ = m.lastgroup
            if type_ == "ident" and text in KEYWORDS:
                type_ = text
            tokens.append(Token(type_, text, pos))
        pos = m.end()
    tokens.append(Token("eof", "", n))
    return tokens


# binary operator precedence, low to high
_PRECEDENCE = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]


class _Parser:
    def __init__(self, source: str, file: str):
        self.source = source
        self.file = file
        self.tokens = tokenize(source, file)
        self.i = 0

    # --- token helpers ---------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek2(self) -> Token:
        return self.tokens[min(self.i + 1, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, type_: str) -> Token:
        tok = self.peek()
        if tok.type != type_:
            self.fail(f"expected {type_!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def fail(self, message: str, tok: Token = None):
        tok = tok or self.peek()
        line, col = _line_col(self.source, tok.pos)
        raise ParseError(message, line, col)

    def _span(self, start: int, end_tok: Token) -> ast.Span:
        return ast.Span(self.file, start, end_tok.pos + len(end_tok.text))

    # --- grammar ---------------------------------------------------------

    def parse_program(self) -> ast.Program:
        start_tok = self.peek()
        options = []
        while self.peek().type == "option":
            options.append(self.parse_option_decl())
        functions = []
        while self.peek().type == "fn":
            functions.append(self.parse_function())
        end = self.expect("eof")
        program = ast.Program(options=options, functions=functions,
                              entry="main", source=self.source, file=self.file)
        program.span = ast.Span(self.file, start_tok.pos, len(self.source))
        return program

    def parse_option_decl(self) -> ast.OptionDecl:
        self.expect("option")
        name = self.expect("ident").text
        kind_tok = self.next()
        if kind_tok.type == "bool":
            values = (False, True)
        elif kind_tok.type == "enum":
            self._expect_punct("{")
            members = [self.expect("ident").text]
            while self._peek_punct(","):
                self.next()
                members.append(self.expect("ident").text)
            self._expect_punct("}")
            values = tuple(members)
        else:
            self.fail("expected 'bool' or 'enum'", kind_tok)
        self.expect("default")
        default_tok = self.next()
        if values == (False, True):
            if default_tok.type not in ("true", "false"):
                self.fail("boolean option default must be true or false", default_tok)
            default = default_tok.type == "true"
        else:
            if default_tok.type != "ident":
                self.fail("enum option default must be a member name", default_tok)
            default = default_tok.text
        self._expect_punct(";")
        return ast.OptionDecl(name=name, values=values, default=default)

    def parse_function(self) -> ast.Function:
        start = self.expect("fn").pos
        name = self.expect("ident").text
        self._expect_punct("(")
        params = []
        if not self._peek_punct(")"):
            while True:
                ptok = self.expect("ident")
                p = ast.Param(name=ptok.text)
                p.span = self._span(ptok.pos, ptok)
                params.append(p)
                if self._peek_punct(","):
                    self.next()
                else:
                    break
        self._expect_punct(")")
        body, end_tok = self.parse_block()
        fn = ast.Function(name=name, params=params, body=body)
        fn.span = self._span(start, end_tok)
        return fn

    def parse_block(self):
        self._expect_punct("{")
        stmts = []
        while not self._peek_punct("}"):
            stmts.append(self.parse_statement())
        end_tok = self.next()
        return stmts, end_tok

    def parse_statement(self) -> ast.Node:
        tok = self.peek()
        if tok.type == "if":
            return self.parse_if()
        if tok.type == "repeat":
            start = self.next().pos
            count = self.parse_expr()
            body, end_tok = self.parse_block()
            stmt = ast.Repeat(count=count, body=body)
            stmt.span = self._span(start, end_tok)
            return stmt
        if tok.type == "return":
            start = self.next().pos
            expr = None
            if not self._peek_punct(";"):
                expr = self.parse_expr()
            end_tok = self._expect_punct(";")
            stmt = ast.Return(expr=expr)
            stmt.span = self._span(start, end_tok)
            return stmt
        if tok.type == "work":
            start = self.next().pos
            self._expect_punct("(")
            expr = self.parse_expr()
            self._expect_punct(")")
            end_tok = self._expect_punct(";")
            stmt = ast.Work(expr=expr)
            stmt.span = self._span(start, end_tok)
            return stmt
        if tok.type == "ident":
            # `x = expr;`, `x = f(args);`, or `f(args);`
            if self.peek2().text == "(":
                start = tok.pos
                callee = self.next().text
                args = self.parse_args()
                end_tok = self._expect_punct(";")
                stmt = ast.CallStmt(target=None, callee=callee, args=args)
                stmt.span = self._span(start, end_tok)
                return stmt
            start = tok.pos
            target = self.next().text
            self._expect_punct("=")
            if (self.peek().type == "ident" and self.peek2().text == "("
                    and self.peek().text != "option"):
                callee = self.next().text
                args = self.parse_args()
                end_tok = self._expect_punct(";")
                stmt = ast.CallStmt(target=target, callee=callee, args=args)
            else:
                expr = self.parse_expr()
                end_tok = self._expect_punct(";")
                stmt = ast.Assign(target=target, expr=expr)
            stmt.span = self._span(start, end_tok)
            return stmt
        self.fail(f"expected a statement, found {tok.text or 'end of input'!r}", tok)

    def parse_if(self) -> ast.If:
        start = self.expect("if").pos
        self._expect_punct("(")
        cond = self.parse_expr()
        self._expect_punct(")")
        then_body, end_tok = self.parse_block()
        else_body = []
        if self.peek().type == "else":
            self.next()
            else_body, end_tok = self.parse_block()
        stmt = ast.If(cond=cond, then_body=then_body, else_body=else_body)
        stmt.span = self._span(start, end_tok)
        return stmt

    def parse_args(self):
        self._expect_punct("(")
        args = []
        if not self._peek_punct(")"):
            while True:
                args.append(self.parse_expr())
                if self._peek_punct(","):
                    self.next()
                else:
                    break
        self._expect_punct(")")
        return args

    def parse_expr(self, level: int = 0) -> ast.Node:
        if level == len(_PRECEDENCE):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        while self.peek().type == "punct" and self.peek().text in _PRECEDENCE[level]:
            op = self.next().text
            right = self.parse_expr(level + 1)
            node = ast.Binary(op=op, left=left, right=right)
            node.span = ast.Span(self.file, left.span.start, right.span.end)
            left = node
        return left

    def parse_unary(self) -> ast.Node:
        tok = self.peek()
        if tok.type == "punct" and tok.text in ("-", "!"):
            self.next()
            operand = self.parse_unary()
            node = ast.Unary(op=tok.text, operand=operand)
            node.span = ast.Span(self.file, tok.pos, operand.span.end)
            return node
        return self.parse_atom()

    def parse_atom(self) -> ast.Node:
        tok = self.next()
        if tok.type == "int":
            node = ast.IntLit(value=int(tok.text))
        elif tok.type in ("true", "false"):
            node = ast.BoolLit(value=tok.type == "true")
        elif tok.type == "symbol":
            node = ast.SymbolLit(name=tok.text[1:])
        elif tok.type == "option" and self._peek_punct("("):
            self.next()
            name_tok = self.next()
            if name_tok.type == "ident":
                name = name_tok.text
            elif name_tok.type == "string":
                name = name_tok.text[1:-1]
            else:
                self.fail("expected option name", name_tok)
            end_tok = self._expect_punct(")")
            node = ast.OptionLoad(option=name)
            node.span = self._span(tok.pos, end_tok)
            return node
        elif tok.type == "ident":
            node = ast.Var(name=tok.text)
        elif tok.type == "punct" and tok.text == "(":
            node = self.parse_expr()
            end_tok = self._expect_punct(")")
            node.span = self._span(node.span.start, end_tok)
            return node
        else:
            self.fail(f"expected an expression, found {tok.text or 'end of input'!r}", tok)
        node.span = self._span(tok.pos, tok)
        return node

    # --- punct helpers ----------------------------------------------------

    def _peek_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.type == "punct" and tok.text == text

    def _expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.type != "punct" or tok.text != text:
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()


def _validate(program: ast.Program) -> None:
    seen_opts = set()
    for opt in program.options:
        if opt.name in seen_opts:
            raise ValidationError(f"duplicate option declaration: {opt.name}")
        seen_opts.add(opt.name)
        if opt.values != (False, True):
            if len(set(opt.values)) < 2:
                raise ValidationError(
                    f"enum option {opt.name} needs >= 2 distinct values")
            if len(set(opt.values)) != len(opt.values):
                raise ValidationError(f"enum option {opt.name} repeats a value")
        if opt.default not in opt.values:
            raise ValidationError(
                f"default of option {opt.name} is outside its domain")
    fn_names = set()
    for fn in program.functions:
        if fn.name in fn_names:
            raise ValidationError(f"duplicate function: {fn.name}")
        fn_names.add(fn.name)
    if program.entry not in fn_names:
        raise ValidationError(f"entry function {program.entry!r} is not defined")
    for fn in program.functions:
        for node in ast.walk(fn):
            if isinstance(node, ast.CallStmt) and node.callee not in fn_names:
                raise ValidationError(
                    f"call to undefined function {node.callee} in {fn.name}")
            if isinstance(node, ast.OptionLoad) and node.option not in seen_opts:
                raise ValidationError(f"undeclared option {node.option}")


def parse_program(source: str, file: str = "<string>") -> ast.Program:
    """Parse and validate MiniConf source text."""
    program = _Parser(source, file).parse_program()
    _validate(program)
    ast.assign_node_ids(program)
    return program


# --- canonical printer ----------------------------------------------------

_INDENT = "  "


def _fmt_expr(node: ast.Node, parent_prec: int = -1) -> str:
    if isinstance(node, ast.IntLit):
        return str(node.value)
    if isinstance(node, ast.BoolLit):
        return "true" if node.value else "false"
    if isinstance(node, ast.SymbolLit):
        return f":{node.name}"
    if isinstance(node, ast.Var):
        return node.name
    if isinstance(node, ast.OptionLoad):
        return f"option({node.option})"
    if isinstance(node, ast.Unary):
        return f"{node.op}{_fmt_expr(node.operand, 99)}"
    if isinstance(node, ast.Binary):
        prec = next(i for i, ops in enumerate(_PRECEDENCE) if node.op in ops)
        text = (f"{_fmt_expr(node.left, prec)} {node.op} "
                f"{_fmt_expr(node.right, prec + 1)}")
        if prec < parent_prec:
            return f"({text})"
        return text
    raise TypeError(f"not an expression node: {node!r}")


def _fmt_stmt(node: ast.Node, depth: int, out: list) -> None:
    pad = _INDENT * depth
    if isinstance(node, ast.Assign):
        out.append(f"{pad}{node.target} = {_fmt_expr(node.expr)};")
    elif isinstance(node, ast.CallStmt):
        args = ", ".join(_fmt_expr(a) for a in node.args)
        prefix = f"{node.target} = " if node.target else ""
        out.append(f"{pad}{prefix}{node.callee}({args});")
    elif isinstance(node, ast.If):
        out.append(f"{pad}if ({_fmt_expr(node.cond)}) {{")
        for s in node.then_body:
            _fmt_stmt(s, depth + 1, out)
        if node.else_body:
            out.append(f"{pad}}} else {{")
            for s in node.else_body:
                _fmt_stmt(s, depth + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(node, ast.Repeat):
        out.append(f"{pad}repeat {_fmt_expr(node.count)} {{")
        for s in node.body:
            _fmt_stmt(s, depth + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(node, ast.Return):
        if node.expr is None:
            out.append(f"{pad}return;")
        else:
            out.append(f"{pad}return {_fmt_expr(node.expr)};")
    elif isinstance(node, ast.Work):
        out.append(f"{pad}work({_fmt_expr(node.expr)});")
    else:
        raise TypeError(f"not a statement node: {node!r}")


def pretty_print(program: ast.Program) -> str:
    """Canonical text rendering; reparsing yields a structurally equal AST."""
    out = []
    for opt in program.options:
        if opt.is_bool:
            default = "true" if opt.default else "false"
            out.append(f"option {opt.name} bool default {default};")
        else:
            members = ", ".join(opt.values)
            out.append(f"option {opt.name} enum {{{members}}} default {opt.default};")
    if program.options:
        out.append("")
    for fn in program.functions:
        params = ", ".join(p.name for p in fn.params)
        out.append(f"fn {fn.name}({params}) {{")
        for s in fn.body:
            _fmt_stmt(s, 1, out)
        out.append("}")
        out.append("")
    return "\n".join(out).rstrip() + "\n"


def option_load_sites(program: ast.Program) -> dict:
    """Map every declared option to the node ids of its `option(NAME)` loads."""
    sites = {opt.name: set() for opt in program.options}
    for node in ast.walk(program):
        if isinstance(node, ast.OptionLoad):
            sites[node.option].add(node.node_id)
    return sites
