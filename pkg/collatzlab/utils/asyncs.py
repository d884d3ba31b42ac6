"""
Async helpers that work under both asyncio and trio. This uses ``sniffio``
to detect the async framework in use, so the long-running search can be
driven from either without depending on one of them.

To give an idea how to use ``sniffio`` to get a generic async sleep function:

.. code-block:: py

    libname = sniffio.current_async_library()
    sleep = sys.modules[libname].sleep

"""

import sys
import sniffio


async def sleep(delay):
    """Generic async sleep. Works with trio and asyncio."""
    libname = sniffio.current_async_library()
    sleep = sys.modules[libname].sleep
    await sleep(delay)


async def run_sync_in_worker_thread(func, *args):
    """Run a blocking function in a worker thread and await its result."""
    libname = sniffio.current_async_library()
    if libname == "trio":
        trio = sys.modules["trio"]
        return await trio.to_thread.run_sync(func, *args)
    elif libname == "asyncio":
        asyncio = sys.modules["asyncio"]
        return await asyncio.get_running_loop().run_in_executor(None, func, *args)
    else:
        raise RuntimeError(f"Unsupported async library: {libname!r}")
