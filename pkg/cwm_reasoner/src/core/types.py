"""命令行JSON输出模型 - 使用pydantic保证输出结构稳定。"""

from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, StrictInt, StrictStr

SCHEMA_VERSION = 1

# -∞ 编码为字符串 "-inf"
WeightValue = Union[StrictInt, StrictStr]


class _SchemaModel(BaseModel):
    """带 "schema" 版本号的顶层模型。"""
    schema_version: int = Field(SCHEMA_VERSION, alias="schema")

    class Config:
        allow_population_by_field_name = True

    def to_json(self, **kwargs) -> str:
        return self.json(by_alias=True, exclude_none=True, **kwargs)


class PreferredTypeModel(BaseModel):
    """一个偏好候选类型。"""
    concepts: List[str]
    weights: Dict[str, WeightValue]


class StatsModel(BaseModel):
    candidates: int
    preferred: int


class OracleModel(BaseModel):
    """--oracle 时附带的暴力判定结果。"""
    entailed: bool
    agrees: bool


class EntailmentResult(_SchemaModel):
    """entails 子命令的输出。"""
    query: str
    entailed: bool
    vacuous: bool
    preferred_types: List[PreferredTypeModel] = []
    stats: StatsModel
    oracle: Optional[OracleModel] = None


class TypesResult(_SchemaModel):
    """types 子命令的输出。"""
    subject: str
    vacuous: bool
    preferred_types: List[PreferredTypeModel] = []
    stats: StatsModel


class SubsumptionModel(BaseModel):
    sub: str
    sup: str


class ClassificationResult(_SchemaModel):
    """classify 子命令的输出。"""
    subsumptions: List[SubsumptionModel] = []
    unsatisfiable: List[str] = []
    specificity: List[SubsumptionModel] = []


class FuzzCaseModel(BaseModel):
    index: int
    query: str
    status: str
    detail: Optional[str] = None


class FuzzResult(_SchemaModel):
    """fuzz 子命令的输出。"""
    n: int
    seed: int
    agreed: int
    skipped: int
    disagreements: List[FuzzCaseModel] = []
    reproducer: Optional[str] = None
