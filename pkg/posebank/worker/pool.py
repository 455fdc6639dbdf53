import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..logger import logger
from ..logs.worker_messages import *


T = TypeVar('T')
R = TypeVar('R')

# numero de hilos por defecto, la linea de comandos lo sobreescribe con --threads
DEFAULT_THREADS = int(os.getenv('POSEBANK_THREADS', '1'))


def ordered_map(func: Callable[[T], R], items: Iterable[T],
                threads: Optional[int] = None) -> List[R]:
    """
    Aplica func a cada elemento y retorna los resultados en el orden de
    entrada, sin importar el numero de hilos. Con un solo hilo no se crea el
    pool.

    Parameters
    ----------
    func : Callable
        Funcion pura que se aplica a cada elemento.
    items : Iterable
        Elementos a procesar.
    threads : int, None
        Numero de hilos; None usa POSEBANK_THREADS.

    Returns
    -------
    out : list
        Resultados en el mismo orden que items.
    """
    threads = DEFAULT_THREADS if threads is None else threads
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(MAP_ITEMS % (len(items), threads))
    with ThreadPoolExecutor(max_workers=threads) as executor:
        # executor.map conserva el orden de entrada
        return list(executor.map(func, items))
