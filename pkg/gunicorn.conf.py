#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Gunicorn配置文件
基的展开缓存在进程内，用少量工作进程加线程
"""

import multiprocessing
import os

# 服务器配置
bind = f"0.0.0.0:{os.environ.get('PORT', 5000)}"
workers = int(os.environ.get('WEB_CONCURRENCY', min(4, multiprocessing.cpu_count())))
worker_class = "gthread"
threads = 4
timeout = 300  # 大的换基和 S4 表可能要算一阵
keepalive = 2
max_requests = 500
max_requests_jitter = 50

# 日志配置
accesslog = "logs/gunicorn_access.log"
errorlog = "logs/gunicorn_error.log"
loglevel = os.environ.get('POLY_LOG_LEVEL', 'info').lower()
access_log_format = '%(h)s %(t)s "%(r)s" %(s)s %(b)s %(D)s'

# 进程管理
preload_app = True
daemon = False
pidfile = "gunicorn.pid"

# 表达式都很短
limit_request_line = 4094
limit_request_fields = 50

raw_env = [
    'FLASK_ENV=production',
    'PYTHONPATH=.',
]


def on_starting(server):
    os.makedirs("logs", exist_ok=True)


def when_ready(server):
    server.log.info("🚀 多项式引擎服务已启动")
    server.log.info(f"📊 工作进程数: {server.cfg.workers}，每个进程 {server.cfg.threads} 个线程")
    server.log.info(f"🌐 监听地址: {server.cfg.bind}")


def post_fork(server, worker):
    server.log.info(f"✅ 工作进程 {worker.pid} 已启动")


def worker_abort(worker):
    worker.log.info(f"❌ 工作进程 {worker.pid} 超时退出，可能是换基计算过大")
