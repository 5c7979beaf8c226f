from flask import Flask, jsonify
import os
import logging
from datetime import datetime

from engine_config import EngineSettings, setup_logging
from logs_api import logs_bp, attach_web_handler
from polynomial_api import poly_bp

app = Flask(__name__)

app.config['MAX_CONTENT_LENGTH'] = 1 * 1024 * 1024  # 1MB，表达式不会更长
app.config['JSON_AS_ASCII'] = False

# 注册蓝图
app.register_blueprint(logs_bp)
app.register_blueprint(poly_bp)

# 配置日志：滚动文件 + 控制台，再挂上内存日志
settings = setup_logging(EngineSettings())
attach_web_handler()
logger = logging.getLogger(__name__)


@app.route('/')
def index():
    """接口一览"""
    return jsonify({
        'service': 'laurent-polynomial-engine',
        'endpoints': sorted(
            str(rule) for rule in app.url_map.iter_rules() if rule.endpoint != 'static'
        ),
        'settings': settings.as_dict(),
    })


@app.route('/health')
def health():
    """健康检查"""
    return jsonify({'status': 'healthy', 'timestamp': datetime.now().isoformat()})


@app.errorhandler(413)
def too_large(e):
    return jsonify({'success': False, 'error': 'request body too large'}), 413


if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    debug_env = os.environ.get('FLASK_DEBUG')
    if debug_env is None:
        debug_mode = os.environ.get('FLASK_ENV', '').lower() == 'development'
    else:
        debug_mode = debug_env.strip().lower() in {'1', 'true', 'yes', 'on'}
    logger.info(f"启动多项式引擎服务，端口 {port}，debug={debug_mode}")
    app.run(
        host='0.0.0.0',
        port=port,
        debug=debug_mode,
        threaded=True,
        use_reloader=False  # 避免重载器导致连接重置
    )
