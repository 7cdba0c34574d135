"""
Film rendering.

This module splits a render into work items of one image tile and a chunk
of wavelengths, traces them on a thread pool and accumulates the results on
a spectral film. Each work item owns a disjoint block of film bins and sums
its samples in a fixed order, so the film is bit-identical for any thread
count.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional

import numpy as np

from ..config import get_config
from ..film import Film
from ..loggers import RenderLogger, RenderLoggerFactory
from .config import RenderConfig
from .integrator import PathTracer

if TYPE_CHECKING:
    from ..scene.scene import Scene

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WorkItem:
    """
    One tile of the film and a contiguous range of grid wavelengths.

    Attributes:
        x0: First column
        y0: First row
        x1: Column past the tile
        y1: Row past the tile
        lam0: First wavelength index
        lam1: Wavelength index past the chunk
    """

    x0: int
    y0: int
    x1: int
    y1: int
    lam0: int
    lam1: int

    @property
    def pixel_count(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


def plan_work(width: int, height: int, config: RenderConfig) -> List[WorkItem]:
    """
    Split a render into tile and wavelength-chunk work items.

    Args:
        width: Film width
        height: Film height
        config: Render configuration (tile size, batch size, spp, grid)

    Returns:
        Work items in row-major tile order, wavelength chunks innermost
    """
    size = config.tile_size
    n = config.grid.count
    items = []
    for y0 in range(0, height, size):
        for x0 in range(0, width, size):
            x1, y1 = min(x0 + size, width), min(y0 + size, height)
            paths_per_wavelength = (x1 - x0) * (y1 - y0) * config.spp
            chunk = max(1, config.batch_size // paths_per_wavelength)
            for lam0 in range(0, n, chunk):
                items.append(WorkItem(x0, y0, x1, y1, lam0, min(lam0 + chunk, n)))
    return items


def _trace_item(tracer: PathTracer, film: Film, item: WorkItem, spp: int) -> int:
    """Trace one work item into its block of the film; returns paths traced."""
    xs = np.arange(item.x0, item.x1)
    ys = np.arange(item.y0, item.y1)
    pixels = (ys[:, None] * film.width + xs[None, :]).ravel()
    wavelengths = np.arange(item.lam0, item.lam1)
    n_lam, n_px = len(wavelengths), len(pixels)

    lam = np.repeat(wavelengths, n_px * spp)
    pix = np.tile(np.repeat(pixels, spp), n_lam)
    sample = np.tile(np.arange(spp), n_lam * n_px)

    result = tracer.trace(pix, sample, lam)
    values = result.contribution
    bad = ~np.isfinite(values) | (values < 0.0)
    if np.any(bad):
        logger.warning(f"Discarding {int(bad.sum())} non-finite or negative path contributions")
        values = np.where(bad, 0.0, values)

    sums = values.reshape(n_lam, n_px, spp).sum(axis=2)
    block = sums.T.reshape(item.y1 - item.y0, item.x1 - item.x0, n_lam)
    rows, cols = slice(item.y0, item.y1), slice(item.x0, item.x1)
    film.add_block(rows, cols, slice(item.lam0, item.lam1), block)
    if item.lam0 == 0:
        film.add_counts(rows, cols, spp)
    return len(values)


def render(
    scene: "Scene",
    config: Optional[RenderConfig] = None,
    threads: Optional[int] = None,
    progress: Optional[RenderLogger] = None,
) -> Film:
    """
    Render a scene to a spectral film.

    Args:
        scene: Validated scene
        config: Render configuration; the scene's settings if None
        threads: Worker threads; the tool configuration's setting if None
        progress: Progress logger; created from the logging configuration if None

    Returns:
        Film with ``spp`` samples in every pixel and wavelength
    """
    config = config or scene.render
    tool = get_config()
    threads = threads or tool.threads
    progress = progress or RenderLoggerFactory.create_logger_from_config(tool.logging)

    camera = scene.camera
    if config.resolution is not None:
        camera = camera.with_resolution(*config.resolution)
    film = Film(camera.width, camera.height, config.grid)

    tracer = PathTracer(scene, config, camera)
    if not tracer.scene.lights:
        logger.warning(f"Scene '{scene.name}' has no lights; the film stays black")
    else:
        # Build lookup tables before workers share the tracer
        tracer.tables

    items = plan_work(camera.width, camera.height, config)
    logger.info(
        f"Rendering '{scene.name}' at {camera.width}x{camera.height}, {config.grid.count} wavelengths, "
        f"{config.spp} spp on {threads} thread(s), {len(items)} work items"
    )

    start = time.perf_counter()
    paths = 0
    report = progress.is_enabled()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_trace_item, tracer, film, item, config.spp) for item in items]
        for done, future in enumerate(as_completed(futures), start=1):
            paths += future.result()
            if report:
                progress.log_progress(done, len(items), paths, time.perf_counter() - start)

    elapsed = time.perf_counter() - start
    logger.info(f"Rendered {paths} paths in {elapsed:.2f}s")
    return film
