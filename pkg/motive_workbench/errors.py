"""
Workbench Errors

All domain errors raised by the workbench. Library code raises these;
only the command line turns them into messages and exit codes.
"""

from typing import Optional, Sequence


class WorkbenchError(ValueError):
    """所有工作台錯誤的基底類別"""


class PartitionError(WorkbenchError):
    """分割不合法或超出盒子"""


class SpaceMismatch(WorkbenchError):
    """兩個類別所在的空間不一致"""


class RingMismatch(WorkbenchError):
    """兩個類別的係數環不一致"""


class UnknownName(WorkbenchError):
    """未知的生成元名稱"""


class NotAUnit(WorkbenchError):
    """總 Chern 類別的常數項不是 1"""


class NonDivisible(WorkbenchError):
    """多項式除法有餘式"""


class CodimMismatch(WorkbenchError):
    """類別不是預期的餘維數"""


class RankOutOfRange(WorkbenchError):
    """Chern 類別的指標超出向量叢的秩"""


class RankLimitExceeded(WorkbenchError):
    """超出 MOTIVE_WORKBENCH_MAX_RANK 的列舉上限"""


class GcdConditionFailed(WorkbenchError):
    """gcd(ind(A), 其餘維數) ≠ 1"""

    def __init__(self, message: str, gcd: int):
        super().__init__(message)
        self.gcd = gcd


class PositionNotAllowed(WorkbenchError):
    """該位置不可移除"""


class SideConditionFailed(WorkbenchError):
    """定理的附加條件不成立"""

    def __init__(self, message: str, clause: str):
        super().__init__(message)
        self.clause = clause


class NotApplicable(WorkbenchError):
    """規則不適用於此旗簇"""


class MissingBaseEntry(WorkbenchError):
    """Poincaré 表中缺少某個基本動機"""


class ChainStepFailed(WorkbenchError):
    """遞迴分解的某一步失敗"""

    def __init__(self, message: str, step: int, cause: Exception):
        super().__init__(message)
        self.step = step
        self.cause = cause


class ConstructionMismatch(WorkbenchError):
    """顯示式與重新計算的結果不一致"""

    def __init__(self, message: str, name: str):
        super().__init__(message)
        self.name = name


class ExpressionSyntaxError(WorkbenchError):
    """表達式語法錯誤，offset 為位元組位置"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExpressionTypeError(WorkbenchError):
    """表達式型別錯誤，path 為出錯節點的路徑"""

    def __init__(self, message: str, path: Optional[Sequence[str]] = None):
        self.path = tuple(path or ())
        where = "/".join(self.path) or "<root>"
        super().__init__(f"{message} (at {where})")
