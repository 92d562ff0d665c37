import functools


# region [decorator]
def try_catch(func):
    """
    Run func and return (ret, err) instead of raising; err is the exception or None.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs), None
        except Exception as e:
            return None, e

    return wrapper
# endregion [decorator]
