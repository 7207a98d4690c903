"""
hamboost测试包
"""
