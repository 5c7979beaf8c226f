#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
服务器启动脚本
gunicorn、Flask 开发模式、Flask 生产模式三选一
"""

import os
import sys
import subprocess
import argparse
from pathlib import Path

from engine_config import EngineSettings


def create_logs_dir(settings: EngineSettings):
    """创建日志目录"""
    logs_dir = Path(settings.log_file).parent if settings.log_file else Path("logs")
    logs_dir.mkdir(parents=True, exist_ok=True)
    print(f"📁 日志目录: {logs_dir.absolute()}")


def start_gunicorn():
    """使用Gunicorn启动服务器"""
    print("🚀 使用Gunicorn启动服务器...")
    try:
        import gunicorn
        print(f"✅ Gunicorn版本: {gunicorn.__version__}")
    except ImportError:
        print("❌ Gunicorn未安装，请先 pip install -r requirements.txt")
        sys.exit(1)

    cmd = [
        "gunicorn",
        "--config", "gunicorn.conf.py",
        "app:app"
    ]
    print(f"🔧 启动命令: {' '.join(cmd)}")
    subprocess.run(cmd)


def start_flask(debug: bool, port: int):
    """使用Flask自带服务器启动"""
    print(f"🚀 使用Flask{'开发' if debug else '生产'}模式启动，端口 {port}...")
    os.environ['FLASK_ENV'] = 'development' if debug else 'production'
    os.environ['FLASK_DEBUG'] = '1' if debug else '0'

    from app import app
    app.run(
        host='0.0.0.0',
        port=port,
        debug=debug,
        threaded=True,
        use_reloader=False
    )


def main():
    parser = argparse.ArgumentParser(description='启动多项式引擎服务')
    parser.add_argument(
        '--mode',
        choices=['gunicorn', 'flask-dev', 'flask-prod'],
        default='gunicorn',
        help='启动模式 (默认: gunicorn)'
    )
    parser.add_argument('--port', type=int, default=int(os.environ.get('PORT', 5000)))
    args = parser.parse_args()

    settings = EngineSettings()
    print("=" * 60)
    print("🎯 多项式引擎服务启动器")
    print(f"⚙️ 默认参数: {', '.join(settings.default_params) or '无'}  默认类型: {settings.default_type}")
    print("=" * 60)

    create_logs_dir(settings)

    if args.mode == 'gunicorn':
        start_gunicorn()
    else:
        start_flask(args.mode == 'flask-dev', args.port)


if __name__ == '__main__':
    main()
