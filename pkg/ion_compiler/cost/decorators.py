import builtins
from functools import wraps
from numbers import Real


def rounded(decimals):
    """
    rounds the float returned by the decorated method to `decimals` places
    """

    def decorator(func):
        @wraps(func)
        def wrapper(self):
            result = func(self)
            if not isinstance(result, Real) or isinstance(result, bool):
                raise TypeError(
                    f"`rounded` can only be used on methods that return real numbers, not {type(result)}"
                )
            return builtins.round(float(result), decimals)

        return wrapper

    return decorator


def non_negative(tol):
    """
    clamps float results within `tol` of zero to exactly zero and rejects negative ones
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            result = func(*args, **kwargs)
            if abs(result) < tol:
                return 0.0
            if result < 0:
                raise ValueError(f"`{func.__name__}` produced a negative value {result}")
            return result

        return wrapper

    return decorator
