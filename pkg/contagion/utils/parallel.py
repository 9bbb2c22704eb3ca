import multiprocessing as mp

from typing import Callable, Iterable, List, Optional

from contagion.utils.tqdm import progress


def resolve_workers(workers: Optional[int]) -> int:
    """
    Number of worker processes to use.

    Args:
        workers (int): Requested number. ``None`` or 0 means every
            available core.
    """
    if not workers:
        return mp.cpu_count()
    assert workers >= 1, "workers must be a positive integer"
    return workers


def parallel_map(
    func: Callable,
    items: Iterable,
    workers: Optional[int] = 1,
    show_progress: bool = False,
    desc: Optional[str] = None,
    chunksize: Optional[int] = None,
) -> List:
    """
    Map ``func`` over ``items``, sequentially or with a process pool.

    Results are returned in the order of ``items`` whatever the number of
    workers, so callers merging them stay deterministic. ``func`` must be
    picklable (a module level function or a ``functools.partial`` of one)
    when more than one worker is used.

    Args:
        func (callable): The function to apply.
        items (iterable): The inputs.
        workers (int): Number of processes. Default to 1
        show_progress (bool): Display a progress bar. Default to ``False``
        desc (str): Progress bar description. Default to ``None``
        chunksize (int): Items sent to a worker at once. Default to an
            even split over four rounds per worker.

    Returns:
        list: ``[func(item) for item in items]``
    """
    items = list(items)
    workers = min(resolve_workers(workers), max(len(items), 1))

    if workers == 1:
        return [func(x) for x in progress(items, show_progress, desc=desc)]

    if chunksize is None:
        chunksize = max(1, len(items) // (4 * workers))

    with mp.Pool(processes=workers) as pool:
        results = pool.imap(func, items, chunksize=chunksize)
        return list(progress(results, show_progress, desc=desc, total=len(items)))
