"""Tiny arithmetic-expression evaluator for experiment configs.

Initial data in config files are strings like "0.1*sin(x) + 0.05*cos(2*x)".
They are parsed once into an AST restricted to arithmetic, a whitelist of
functions, and the declared variables, then evaluated with numpy semantics.
"""

import ast
import math

import numpy as np

from .errors import ParameterError

_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "tanh": np.tanh,
    "log": np.log,
}

_CONSTANTS = {"pi": math.pi, "e": math.e}

_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
    ast.Mod: np.mod,
}

_UNARYOPS = {ast.UAdd: lambda v: v, ast.USub: np.negative}


def compile_expression(text: str, variables=("x",)):
    """Compile an expression over the given variables into a vectorized callable."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParameterError(f"cannot parse expression {text!r}: {exc}") from None
    _validate(tree.body, variables)

    def evaluate(*args):
        if len(args) != len(variables):
            raise ParameterError(f"expression expects {len(variables)} argument(s)")
        env = dict(zip(variables, args))
        return _eval(tree.body, env)

    return evaluate


def _validate(node, variables):
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ParameterError(f"non-numeric constant {node.value!r} in expression")
    elif isinstance(node, ast.Name):
        if node.id not in variables and node.id not in _CONSTANTS:
            raise ParameterError(f"unknown name {node.id!r} in expression")
    elif isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _validate(node.left, variables)
        _validate(node.right, variables)
    elif isinstance(node, ast.UnaryOp) and type(node.op) in _UNARYOPS:
        _validate(node.operand, variables)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ParameterError("only sin/cos/tan/exp/sqrt/abs/tanh/log calls are allowed")
        if node.keywords or len(node.args) != 1:
            raise ParameterError("expression functions take exactly one positional argument")
        _validate(node.args[0], variables)
    else:
        raise ParameterError(f"disallowed syntax in expression: {ast.dump(node)}")


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        return env.get(node.id, _CONSTANTS.get(node.id))
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        return _UNARYOPS[type(node.op)](_eval(node.operand, env))
    if isinstance(node, ast.Call):
        return _FUNCTIONS[node.func.id](_eval(node.args[0], env))
    raise ParameterError("disallowed syntax in expression")
