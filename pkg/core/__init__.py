"""
Core Package
Estructuras algebraicas y combinatorias de xkit: grupos, grupoides,
módulos cruzados, cálculo de Fox, complejos cruzados, producto tensorial,
cubos y el grupoide doble de un módulo cruzado
"""

from .errors import XkitError, InputError, MathFailure, Unbounded
from .config_manager import ConfigManager, XkitSettings
from .data_parser import DataParser, ParseResult
from .algebra import FiniteGroup, FreeWord, GroupPresentation, enumerate_fp_group
from .groupoids import DirectedGraph, GroupoidPresentation, pushout, vertex_group
from .crossed_module import CrossedModule, FreeCrossedModule, make_standard, validate
from .crossed_complex import CrossedComplex, CrossedComplexMorphism, homology, validate_complex
from .tensor import HomotopyData, check_homotopy, cylinder, tensor_complex
from .cubes import CubeCell, CubeComplex, box_chain, product_collapse, subdivide
from .double_groupoid import DoubleGroupoid, Shell3, from_crossed_module, law_suite

__all__ = [
    'XkitError',
    'InputError',
    'MathFailure',
    'Unbounded',
    'ConfigManager',
    'XkitSettings',
    'DataParser',
    'ParseResult',
    'FiniteGroup',
    'FreeWord',
    'GroupPresentation',
    'enumerate_fp_group',
    'DirectedGraph',
    'GroupoidPresentation',
    'pushout',
    'vertex_group',
    'CrossedModule',
    'FreeCrossedModule',
    'make_standard',
    'validate',
    'CrossedComplex',
    'CrossedComplexMorphism',
    'homology',
    'validate_complex',
    'HomotopyData',
    'check_homotopy',
    'cylinder',
    'tensor_complex',
    'CubeCell',
    'CubeComplex',
    'box_chain',
    'product_collapse',
    'subdivide',
    'DoubleGroupoid',
    'Shell3',
    'from_crossed_module',
    'law_suite',
]

__version__ = '1.0.0'
