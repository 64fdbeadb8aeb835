"""
Workbench Configuration

Provides configuration management for the motive workbench.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

MAX_RANK_ENV = "MOTIVE_WORKBENCH_MAX_RANK"
LOAD_DOTENV_ENV = "MOTIVE_WORKBENCH_LOAD_DOTENV"

DEFAULT_MAX_RANK = 8
VALID_FORMATS = ["text", "json"]


class WorkbenchConfig:
    """工作台配置類別"""

    def __init__(self, config_file: Optional[str] = None):
        """
        初始化工作台配置

        配置載入優先順序：
        1. 環境變數（MOTIVE_WORKBENCH_MAX_RANK）
        2. YAML 配置檔案
        3. 預設值（備用）

        Args:
            config_file: YAML 配置檔案路徑（可選）

        Raises:
            ValueError: 當配置值無效時拋出異常
            FileNotFoundError: 當配置檔案不存在時拋出異常
        """
        if config_file is not None and config_file.strip() == '':
            raise ValueError("config_file 不能為空字串。請提供配置檔案路徑或省略此參數。")

        self.config_file = config_file
        self._config_data = self._load_yaml_config(config_file) if config_file else {}

        # 驗證配置檔案結構
        self._validate_config_structure()

        self.load_dotenv = self._get_config_value('app.load_dotenv', True, bool)
        env_flag = os.environ.get(LOAD_DOTENV_ENV)
        if env_flag is not None:
            self.load_dotenv = env_flag.lower() in ('true', '1', 'yes', 'on')
        if self.load_dotenv:
            load_dotenv()

        self.debug = self._get_config_value('app.debug', False, bool)
        self.max_rank = self._get_config_value('workbench.max_rank', DEFAULT_MAX_RANK, int)
        self.default_modulus = self._get_config_value('workbench.default_modulus', 5, int)
        self.report_format = self._get_config_value('report.format', 'text')
        self.report_timings = self._get_config_value('report.timings', False, bool)

        # 環境變數優先於配置檔案
        env_rank = os.environ.get(MAX_RANK_ENV)
        if env_rank is not None and env_rank.strip() != '':
            try:
                self.max_rank = int(env_rank)
            except ValueError:
                raise ValueError(f"無效的 {MAX_RANK_ENV} 值: {env_rank}。必須為正整數")

        if self.max_rank <= 0:
            raise ValueError(f"無效的 max_rank 值: {self.max_rank}。必須為正整數")
        logger.debug("loaded %s", self)

    def _load_yaml_config(self, config_file: str) -> Dict[str, Any]:
        """載入 YAML 配置檔案"""
        if not Path(config_file).exists():
            raise FileNotFoundError(f"配置檔案不存在：{config_file}")

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                return yaml.safe_load(f) or {}
        except Exception as e:
            raise ValueError(f"無法載入配置檔案 {config_file}: {e}")

    def _validate_config_structure(self) -> None:
        """驗證配置檔案結構是否正確（只檢查出現的區段）"""
        known_sections = {
            'workbench': ['max_rank', 'default_modulus'],
            'report': ['format', 'timings'],
            'app': ['load_dotenv', 'debug'],
        }

        for section, section_data in self._config_data.items():
            if section not in known_sections:
                raise ValueError(f"配置檔案含有未知區段: {section}")
            if not isinstance(section_data, dict):
                raise ValueError(f"配置檔案 {section} 區段必須是對應表")
            for key in section_data:
                if key not in known_sections[section]:
                    raise ValueError(f"配置檔案 {section} 區段含有未知配置: {key}")

        workbench = self._config_data.get('workbench', {})
        if 'max_rank' in workbench:
            max_rank = workbench['max_rank']
            if not isinstance(max_rank, int) or max_rank <= 0:
                raise ValueError(f"無效的 max_rank 值: {max_rank}。必須為正整數")
        if 'default_modulus' in workbench:
            modulus = workbench['default_modulus']
            if not isinstance(modulus, int) or modulus < 2:
                raise ValueError(f"無效的 default_modulus 值: {modulus}。必須為 ≥ 2 的整數")

        report = self._config_data.get('report', {})
        if 'format' in report and report['format'] not in VALID_FORMATS:
            raise ValueError(f"無效的報告格式: {report['format']}。可選值: {', '.join(VALID_FORMATS)}")

    def _get_config_value(self, key_path: str, default: Any = None, value_type: type = str) -> Any:
        """
        從配置字典中獲取值，支援點分隔的鍵路徑

        Args:
            key_path: 配置鍵路徑，如 'workbench.max_rank'
            default: 預設值
            value_type: 值類型轉換函數

        Returns:
            配置值
        """
        try:
            keys = key_path.split('.')
            value = self._config_data

            for key in keys:
                value = value[key]

            if value_type == bool and isinstance(value, str):
                return value.lower() in ('true', '1', 'yes', 'on')
            elif value_type != str:
                return value_type(value)
            else:
                return value

        except (KeyError, TypeError, ValueError):
            return default

    def validate(self) -> bool:
        """
        驗證配置是否有效

        Returns:
            配置是否有效
        """
        try:
            if self.max_rank <= 0:
                return False
            if self.default_modulus < 2:
                return False
            if self.report_format not in VALID_FORMATS:
                return False
            return True
        except Exception:
            return False

    def to_dict(self) -> dict:
        """
        將配置轉換為字典

        Returns:
            配置字典
        """
        return {
            'max_rank': self.max_rank,
            'default_modulus': self.default_modulus,
            'report_format': self.report_format,
            'report_timings': self.report_timings,
            'load_dotenv': self.load_dotenv,
            'debug': self.debug,
        }

    def __str__(self) -> str:
        config_dict = self.to_dict()
        return f"WorkbenchConfig({', '.join(f'{k}={v}' for k, v in config_dict.items())})"


def create_workbench_config(config_file: Optional[str] = None) -> WorkbenchConfig:
    """
    創建工作台配置的工廠函數

    Args:
        config_file: YAML 配置檔案路徑（可選）

    Returns:
        WorkbenchConfig 實例
    """
    return WorkbenchConfig(config_file=config_file)


# 全域配置實例 - 延遲初始化
_workbench_config: Optional[WorkbenchConfig] = None


def get_workbench_config() -> WorkbenchConfig:
    """獲取工作台配置實例（未設定時以預設值建立）"""
    global _workbench_config
    if _workbench_config is None:
        _workbench_config = WorkbenchConfig()
    return _workbench_config


def set_workbench_config(config: Optional[WorkbenchConfig]) -> None:
    """設置工作台配置（傳入 None 會在下次取用時重建預設配置）"""
    global _workbench_config
    _workbench_config = config
