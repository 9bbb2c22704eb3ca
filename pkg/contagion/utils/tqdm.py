from typing import Iterable, Optional

try:
    from tqdm import tqdm
    from tqdm.notebook import tqdm as tqdm_notebook
except ImportError:
    tqdm = None
    tqdm_notebook = None


def is_notebook_lab():
    try:
        shell = get_ipython().__class__.__name__
        # Jupyter notebook/lab or qtconsole
        return shell == "ZMQInteractiveShell"
    except NameError:
        # Plain interpreter, or the command line entry point
        return False


def get_progress_bars():
    """
    Get which progress bar to use depending on usage.

    Returns:
        A tqdm pbar.
    """
    assert tqdm is not None, "tqdm is not installed"
    return tqdm_notebook if is_notebook_lab() else tqdm


def progress(
    iterable: Iterable,
    show_progress: bool = False,
    desc: Optional[str] = None,
    total: Optional[int] = None,
) -> Iterable:
    """
    Wrap an iterable into a progress bar when requested.

    Args:
        iterable (iterable): Items to iterate over.
        show_progress (bool): Whether to display the bar. Default to ``False``
        desc (str): Bar description. Default to ``None``
        total (int): Number of items, if ``iterable`` has no length.
            Default to ``None``

    Returns:
        The iterable itself, or a progress bar over it.
    """
    if not show_progress:
        return iterable
    return get_progress_bars()(iterable, desc=desc, total=total)
