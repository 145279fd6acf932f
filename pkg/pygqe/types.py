def _toTuple(argOrArgs):
    return argOrArgs if isinstance(argOrArgs, tuple) else (argOrArgs, )

def _genRepr(arg):
    if isinstance(arg, type):
        module = arg.__module__
        name = arg.__name__

        if module != "builtins":
            return f"{module}.{name}"
        return name

    return repr(arg)

class _Generic:
    __slots__ = ()
    expectedLength = 1

    @classmethod
    def __class_getitem__(cls, argOrArgs):
        args = _toTuple(argOrArgs)

        if (
            cls.expectedLength is not None
            and len(args) != cls.expectedLength
        ):
            raise TypeError(f"{__name__}.{cls.__name__}: Length of arguments does not match.")

        repr = (
            f"{cls.__name__}"
            f"[{', '.join(_genRepr(arg) for arg in args)}]"
        )

        return type(repr, (cls, ), {"__args__": args})

class Base:
    """Annotation marker; never instantiated."""
    __slots__ = ()

class Any(Base):
    pass

class Unit(Base):
    pass

class String(Base):
    """
    >>> verdict: String = "exists"
    """
    pass

class Boolean(Base):
    pass

class Int(Base):
    """
    >>> d0: Int = 1
    """
    pass

class Rational(Base):
    """
    Exact value, carried as `fractions.Fraction`.

    >>> x1: Rational = Fraction(4, 5)
    """
    pass

class Real(Base):
    """
    Floating point value; only the k-equation and the momentum profile
    leave exact arithmetic.

    >>> k: Real = -0.3126
    """
    pass

class List(Base, _Generic):
    """
    >>> coefficients: List[Rational] = [Fraction(0), Fraction(-14, 11)]
    """
    pass

class Tuple(Base, _Generic):
    """
    >>> interval: Tuple[Rational, ...] = (Fraction(-1), Fraction(1))
    """
    expectedLength = None

class Optional(Base, _Generic):
    """
    >>> witness: Optional[Real] = None
    """
    pass

class Map(Base, _Generic):
    """
    >>> residuals: Map[String, Real] = {
    ...     "F(-1)": 0.0,
    ...     "F(1)": 3.1e-14
    ... }
    """
    expectedLength = 2

class Callable(Base, _Generic):
    """
    >>> F: Callable[Real, Real] = momentum.F
    """
    expectedLength = 2
