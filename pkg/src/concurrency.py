"""
Bounded concurrent execution of independent numerical jobs
Jobs run in worker threads (numpy/scipy release the GIL); results keep submission order
"""

import asyncio
from typing import Any, Callable, List, Sequence

import structlog

logger = structlog.get_logger(__name__)


async def gather_bounded(calls: Sequence[Callable[[], Any]], limit: int = 1) -> List[Any]:
    """Run zero-argument callables with at most `limit` in flight; re-raise the first failure"""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    semaphore = asyncio.Semaphore(limit)

    async def _run(index, call):
        async with semaphore:
            logger.debug("job_started", index=index)
            return await asyncio.to_thread(call)

    results = await asyncio.gather(*(_run(i, call) for i, call in enumerate(calls)), return_exceptions=True)

    for result in results:
        if isinstance(result, BaseException):
            raise result
    return list(results)


def run_bounded(calls: Sequence[Callable[[], Any]], limit: int = 1) -> List[Any]:
    """Synchronous entry point; a limit of 1 runs inline without an event loop"""
    if limit <= 1 or len(calls) <= 1:
        return [call() for call in calls]
    return asyncio.run(gather_bounded(calls, limit))
