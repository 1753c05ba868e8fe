"""
Errors Module
Jerarquía de excepciones compartida por todos los módulos de xkit.
Cada excepción lleva el código de salida que usa la CLI.
"""

from typing import Any, Optional


class XkitError(Exception):
    """Error base de la librería"""

    exit_code = 2

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def __getattr__(self, name: str) -> Any:
        context = self.__dict__.get('context', {})
        if name in context:
            return context[name]
        raise AttributeError(name)


class InputError(XkitError):
    """Entrada mal formada o precondición incumplida (código 2)"""

    exit_code = 2


class MathFailure(XkitError):
    """Se encontró una violación matemática (código 1)"""

    exit_code = 1


class Unbounded(XkitError):
    """La enumeración no estabilizó dentro de la cota (código 3)"""

    exit_code = 3

    def __init__(self, message: str, bound: Optional[int] = None, **context: Any):
        super().__init__(message, bound=bound, **context)


class ParseError(InputError):
    pass


class PreconditionFailed(InputError):
    pass


class NotComposable(InputError):
    pass


class ObjectNotFound(InputError):
    pass


class InfiniteCarrier(InputError):
    pass


class UnsupportedAction(InputError):
    pass


class InvalidCrossedModule(InputError):
    pass


class NotFree(InputError):
    pass


class NotFace(InputError):
    pass


class NotSubcomplex(InputError):
    pass


class NotContained(InputError):
    pass


class NotPartialBox(InputError):
    pass


class MalformedShell(InputError):
    pass


class UnknownSuite(InputError):
    pass


class IncidenceMismatch(MathFailure):
    """Dos partes adyacentes no comparten la cara etiquetada"""

    def __init__(self, message: str, pair: Any = None, **context: Any):
        super().__init__(message, pair=pair, **context)
