"""
Config Manager Module
Sistema de gestión de configuración centralizada
con override por variables de entorno (XKIT_BOUND)
"""

import json
import logging
import os
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, Any, Optional

logger = logging.getLogger(__name__)

ENV_BOUND = "XKIT_BOUND"
DEFAULT_BOUND = 4096


@dataclass
class XkitSettings:
    """Vista tipada de la configuración efectiva"""
    bound: int = DEFAULT_BOUND
    max_cube_dimension: int = 6
    law_max_cases: int = 20_000
    law_max_shells: int = 2_000
    law_seed: int = 1729
    tensor_maxdeg: int = 4
    output_mode: str = "human"
    log_level: str = "WARNING"

    def to_dict(self) -> dict:
        """Convierte a diccionario"""
        return asdict(self)


class ConfigManager:
    """Gestor centralizado de configuración"""

    CONFIG_FILE = "xkit_config.json"

    def __init__(self, config_dir: Optional[str] = None, persist: bool = True):
        """
        Inicializa el gestor de configuración

        Args:
            config_dir: Directorio de configuración (por defecto ./config)
            persist: Si es False no se escribe nada en disco
        """
        self.config_dir = Path(config_dir) if config_dir else Path.cwd() / "config"
        self.persist = persist
        self.app_config = self._load_or_create_config(self.CONFIG_FILE, self._get_default_app_config())

    def _get_default_app_config(self) -> Dict:
        """Retorna la configuración por defecto"""
        return {
            "version": "1.0.0",
            "enumeration": {
                "bound": DEFAULT_BOUND
            },
            "cubes": {
                "max_dimension": 6
            },
            "laws": {
                "max_cases": 20_000,
                "max_shells": 2_000,
                "seed": 1729
            },
            "tensor": {
                "maxdeg": 4
            },
            "output": {
                "mode": "human"
            },
            "logging": {
                "level": "WARNING"
            }
        }

    def _load_or_create_config(self, filename: str, default: Dict) -> Dict:
        """
        Carga un archivo de configuración o crea uno por defecto

        Args:
            filename: Nombre del archivo
            default: Configuración por defecto

        Returns:
            Configuración cargada o creada
        """
        config_path = self.config_dir / filename

        if config_path.exists():
            try:
                with open(config_path, 'r', encoding='utf-8') as f:
                    loaded = json.load(f)
                return self._merge(default, loaded)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning("Error cargando %s: %s; usando configuración por defecto", filename, e)
                return default

        if self.persist:
            self._save_config(filename, default)
        return default

    def _merge(self, base: Dict, override: Dict) -> Dict:
        merged = dict(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = self._merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _save_config(self, filename: str, config: Dict):
        """
        Guarda una configuración en archivo

        Args:
            filename: Nombre del archivo
            config: Configuración a guardar
        """
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_dir / filename, 'w', encoding='utf-8') as f:
                json.dump(config, f, indent=4, ensure_ascii=False)
            logger.debug("Configuración guardada: %s", filename)
        except OSError as e:
            logger.warning("Error guardando %s: %s", filename, e)

    def update_setting(self, key: str, value: Any):
        """
        Actualiza una configuración

        Args:
            key: Clave de configuración (puede ser anidada con '.')
            value: Nuevo valor
        """
        keys = key.split('.')
        config = self.app_config

        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

        if self.persist:
            self._save_config(self.CONFIG_FILE, self.app_config)

    def get_setting(self, key: str, default: Any = None) -> Any:
        """
        Obtiene una configuración

        Args:
            key: Clave de configuración (puede ser anidada con '.')
            default: Valor por defecto si no existe

        Returns:
            Valor de la configuración
        """
        keys = key.split('.')
        config = self.app_config

        try:
            for k in keys:
                config = config[k]
            return config
        except (KeyError, TypeError):
            return default

    def enumeration_bound(self) -> int:
        """Cota de enumeración efectiva; XKIT_BOUND tiene prioridad"""
        raw = os.environ.get(ENV_BOUND)
        if raw is not None:
            try:
                value = int(raw)
                if value >= 1:
                    return value
            except ValueError:
                pass
            logger.warning("%s=%r ignorado: se espera un entero positivo", ENV_BOUND, raw)
        return int(self.get_setting("enumeration.bound", DEFAULT_BOUND))

    def settings(self) -> XkitSettings:
        """Configuración efectiva como dataclass"""
        return XkitSettings(
            bound=self.enumeration_bound(),
            max_cube_dimension=int(self.get_setting("cubes.max_dimension", 6)),
            law_max_cases=int(self.get_setting("laws.max_cases", 20_000)),
            law_max_shells=int(self.get_setting("laws.max_shells", 2_000)),
            law_seed=int(self.get_setting("laws.seed", 1729)),
            tensor_maxdeg=int(self.get_setting("tensor.maxdeg", 4)),
            output_mode=str(self.get_setting("output.mode", "human")),
            log_level=str(self.get_setting("logging.level", "WARNING")),
        )

    def reset_to_defaults(self):
        """Resetea toda la configuración a valores por defecto"""
        self.app_config = self._get_default_app_config()
        if self.persist:
            self._save_config(self.CONFIG_FILE, self.app_config)
        logger.info("Configuración reseteada a valores por defecto")
