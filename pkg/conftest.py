"""
Pytest configuration file for motive_workbench tests
"""

import sys
import os

import pytest

# 禁用 .env 檔案載入，避免測試時載入實際的環境變數
os.environ['MOTIVE_WORKBENCH_LOAD_DOTENV'] = 'false'

# 設置測試環境變數
os.environ['MOTIVE_WORKBENCH_MAX_RANK'] = '8'

# Add the package directory to Python path
package_dir = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, package_dir)


@pytest.fixture(autouse=True)
def reset_workbench_config():
    """每個測試結束後清除全域配置（CLI 會設定它）"""
    from motive_workbench.config import set_workbench_config
    yield
    set_workbench_config(None)
