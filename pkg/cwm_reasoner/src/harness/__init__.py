"""随机知识库生成与差分测试。"""
