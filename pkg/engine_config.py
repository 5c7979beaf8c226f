"""
配置与日志
环境变量 POLY_* 提供默认值，命令行参数和请求参数在 SessionConfig 里覆盖它们
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from engine_errors import PolynomialEngineError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class EngineSettings:
    """引擎设置"""

    def __init__(self):
        self.log_level = os.getenv('POLY_LOG_LEVEL', 'INFO').upper()
        self.log_file = os.getenv('POLY_LOG_FILE', 'logs/app.log')
        raw_params = os.getenv('POLY_DEFAULT_PARAMS', '')
        self.default_params = tuple(p.strip() for p in raw_params.split(',') if p.strip())
        self.default_type = os.getenv('POLY_DEFAULT_TYPE', 'A').upper()
        self.output_format = os.getenv('POLY_OUTPUT_FORMAT', 'text').lower()
        self.recursion_factor = self._int_env('POLY_RECURSION_FACTOR', 4)
        self.degree_workers = self._int_env('POLY_DEGREE_WORKERS', 4)

    @staticmethod
    def _int_env(name: str, default: int) -> int:
        value = os.getenv(name)
        if value is None or not value.strip():
            return default
        try:
            result = int(value)
        except ValueError:
            raise PolynomialEngineError(f"{name} must be an integer, got '{value}'") from None
        if result < 1:
            raise PolynomialEngineError(f"{name} must be positive, got {result}")
        return result

    def as_dict(self) -> dict:
        return {
            'log_level': self.log_level,
            'log_file': self.log_file,
            'default_params': list(self.default_params),
            'default_type': self.default_type,
            'output_format': self.output_format,
            'recursion_factor': self.recursion_factor,
            'degree_workers': self.degree_workers,
        }

    def __repr__(self):
        return f"EngineSettings({self.as_dict()})"


def setup_logging(settings: EngineSettings = None, stream=None):
    """
    根日志：滚动文件 + 控制台
    命令行把控制台输出放到 stderr，stdout 只留结果
    """
    settings = settings or EngineSettings()
    handlers = [logging.StreamHandler(stream or sys.stderr)]
    if settings.log_file:
        log_dir = os.path.dirname(settings.log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.insert(0, RotatingFileHandler(
            settings.log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        ))
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )
    logger.debug(f"日志已配置: {settings.log_level} -> {settings.log_file or 'stderr'}")
    return settings
