"""
Modules Package
Herramientas de alto nivel de xkit: catálogo de ejemplos y baterías de aceptación
"""

from .catalogue import Catalogue, CatalogueCheck, CatalogueEntry
from .acceptance import AcceptanceRunner, SUITES

__all__ = [
    'Catalogue',
    'CatalogueCheck',
    'CatalogueEntry',
    'AcceptanceRunner',
    'SUITES',
]

__version__ = '1.0.0'
