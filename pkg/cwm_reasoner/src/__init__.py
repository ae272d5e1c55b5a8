"""加权可废止EL⊥知识库的cw^m-蕴涵推理机。"""

__version__ = "0.1.0"
