"""Bounded concurrent evaluation of independent, pure evaluations.

Evaluations such as sigma(lambda) on a scan grid share no mutable state, so they
are run as worker-thread coroutines gathered on one event loop, at most
``threads`` at a time.
"""

import asyncio
import concurrent.futures
from typing import Any, Callable, Coroutine, List, Sequence, TypeVar

from asgiref.sync import sync_to_async

T = TypeVar("T")
R = TypeVar("R")


def run_concurrently(
    func: Callable[[T], R],
    items: Sequence[T],
    threads: int = 1,
    return_exceptions: bool = False,
) -> List[Any]:
    """Apply ``func`` to every item, preserving order.

    Args:
        func: Pure function of a single item
        items: Inputs
        threads: Maximum number of simultaneous evaluations; 1 runs inline
        return_exceptions: Put raised exceptions in the result list instead of
            propagating the first one

    Returns:
        List of results (or exceptions) in the order of ``items``
    """
    if threads <= 1 or len(items) <= 1:
        results: List[Any] = []
        for item in items:
            try:
                results.append(func(item))
            except Exception as exc:
                if not return_exceptions:
                    raise
                results.append(exc)
        return results

    async def gather_all() -> List[Any]:
        semaphore = asyncio.Semaphore(threads)
        worker = sync_to_async(func, thread_sensitive=False)

        async def bounded(item: T) -> R:
            async with semaphore:
                return await worker(item)

        return await asyncio.gather(
            *[bounded(item) for item in items], return_exceptions=return_exceptions
        )

    return _run_async_safely(gather_all())


def _run_async_safely(coro: Coroutine[Any, Any, List[Any]]) -> List[Any]:
    """Run a coroutine whether or not an event loop is already running."""
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(coro)
    with concurrent.futures.ThreadPoolExecutor(max_workers=1) as executor:
        return executor.submit(asyncio.run, coro).result()
