from ..exceptions import InvalidParameterError


def check_p_f(p_f):
    if not 0 < p_f < 1:
        raise InvalidParameterError(f"p_f must lie in (0, 1), got {p_f!r}")
