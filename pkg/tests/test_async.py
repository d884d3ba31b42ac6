"""
Test the async search runner under asyncio and trio.
"""

import asyncio

import trio
import sniffio

from collatzlab import RecordSearch, run_search, run_search_async
from collatzlab.utils.asyncs import run_sync_in_worker_thread, sleep as async_sleep
from testutils import run_tests
import pytest


def test_run_search_async_asyncio():
    report = asyncio.run(run_search_async(27, 3))
    assert report == run_search(27, 3)


def test_run_search_async_trio():
    report = trio.run(run_search_async, 27, 3)
    assert report == run_search(27, 3)


def test_search_keeps_loop_responsive():
    ticks = []

    async def ticker():
        for _ in range(3):
            ticks.append(1)
            await asyncio.sleep(0)

    async def main():
        search = RecordSearch(27)
        report, _ = await asyncio.gather(search.run_async(2), ticker())
        return report

    report = asyncio.run(main())
    assert len(report.rows) == 2
    assert len(ticks) == 3


def test_async_helpers():
    async def main():
        await async_sleep(0)
        return await run_sync_in_worker_thread(sum, [1, 2, 3])

    assert asyncio.run(main()) == 6
    assert trio.run(main) == 6


def test_async_helpers_need_a_loop():
    coro = async_sleep(0)
    with pytest.raises(sniffio.AsyncLibraryNotFoundError):
        coro.send(None)
    coro.close()


if __name__ == "__main__":
    run_tests(globals())
