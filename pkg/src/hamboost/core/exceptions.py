"""
hamboost异常类定义

定义了包中使用的所有自定义异常类。实验失败（预算耗尽、匹配失败等）
不是异常，而是记录在结果中的数据。
"""

from typing import Optional


class HamboostError(Exception):
    """hamboost包的基础异常类"""
    pass


class GraphFormatError(HamboostError):
    """边列表格式错误，附带出错行号"""
    def __init__(self, reason: str, line: Optional[int] = None, path: Optional[str] = None):
        self.reason = reason
        self.line = line
        self.path = path
        location = ""
        if path:
            location += f"{path}"
        if line is not None:
            location += f" 第{line}行" if location else f"第{line}行"
        message = f"边列表格式错误: {reason}"
        if location:
            message = f"{message} ({location.strip()})"
        super().__init__(message)


class GraphValidationError(HamboostError):
    """图结构不满足不变量"""
    pass


class SamplingError(HamboostError):
    """随机边采样参数错误"""
    pass


class RotationError(HamboostError):
    """Pósa旋转的前置条件不满足"""
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"旋转被拒绝: {reason}")


class MatchingError(HamboostError):
    """匹配不是完美匹配等错误"""
    pass


class SurgeryError(HamboostError):
    """近似圈覆盖（NCC）手术的前置条件不满足"""
    pass


class OracleLimitError(HamboostError):
    """精确oracle拒绝超出规模限制的输入"""
    def __init__(self, oracle: str, n: int, limit: int):
        self.oracle = oracle
        self.n = n
        self.limit = limit
        super().__init__(f"{oracle} 拒绝输入: n={n} 超过上限 {limit}")


class ConstantsError(HamboostError):
    """阈值常数的定义域错误"""
    def __init__(self, constraint: str, value: float):
        self.constraint = constraint
        self.value = value
        super().__init__(f"参数 d={value} 违反约束 {constraint}")


class ConfigError(HamboostError):
    """配置错误，指出出错的字段"""
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"配置字段 '{field}' 无效: {reason}")


class CertificateError(HamboostError):
    """引擎给出的哈密顿圈未通过验证"""
    pass
