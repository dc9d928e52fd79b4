from .ast import (
    Assign, Binary, BoolLit, CallStmt, Function, If, IntLit, Node,
    OptionDecl, OptionLoad, Param, Program, Repeat, Return, Span, SymbolLit,
    Unary, Var, Work, assign_node_ids, enclosing_function, node_index, walk,
)
from .parser import option_load_sites, parse_program, pretty_print

__all__ = [
    "Assign", "Binary", "BoolLit", "CallStmt", "Function", "If", "IntLit",
    "Node", "OptionDecl", "OptionLoad", "Param", "Program", "Repeat",
    "Return", "Span", "SymbolLit", "Unary", "Var", "Work",
    "assign_node_ids", "enclosing_function", "node_index", "walk",
    "option_load_sites", "parse_program", "pretty_print",
]
