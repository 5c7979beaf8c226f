"""
内存日志接口
最近的日志记录留在一个有界队列里，可以按级别、模块、关键字查看，
也可以按模块统计（哪些模块在换基、展开、算次数表）
"""

from flask import Blueprint, request, jsonify
import logging
import threading
from collections import Counter, deque
from datetime import datetime

logger = logging.getLogger(__name__)

logs_bp = Blueprint('logs', __name__, url_prefix='/logs')

MAX_MEMORY_LOGS = 1000
_records = deque(maxlen=MAX_MEMORY_LOGS)
_records_lock = threading.Lock()


class WebLogHandler(logging.Handler):
    """把日志记录转成字典存进 _records"""

    def emit(self, record):
        try:
            entry = {
                'timestamp': datetime.fromtimestamp(record.created).strftime('%Y-%m-%d %H:%M:%S.%f')[:-3],
                'level': record.levelname,
                'logger': record.name,
                'message': record.getMessage(),
                'location': f"{record.module}.{record.funcName}:{record.lineno}",
            }
            with _records_lock:
                _records.append(entry)
        except Exception:
            self.handleError(record)


web_handler = WebLogHandler()


def attach_web_handler(level=logging.INFO):
    """挂到根日志上；setup_logging 会重置根日志的处理器，所以要在它之后调用"""
    web_handler.setLevel(level)
    root_logger = logging.getLogger()
    if web_handler not in root_logger.handlers:
        root_logger.addHandler(web_handler)
    return web_handler


def snapshot(level: str = 'all', module: str = '', search: str = ''):
    """按级别、logger 名前缀和关键字过滤，返回列表副本"""
    with _records_lock:
        entries = list(_records)
    if level != 'all':
        entries = [e for e in entries if e['level'] == level.upper()]
    if module:
        entries = [e for e in entries if e['logger'].startswith(module)]
    if search:
        needle = search.lower()
        entries = [e for e in entries if needle in e['message'].lower()]
    return entries


def _query():
    return snapshot(
        request.args.get('level', 'all'),
        request.args.get('module', ''),
        request.args.get('search', ''),
    )


@logs_bp.route('/get_logs', methods=['GET'])
def get_logs():
    """最近的日志；limit 取最后几条"""
    try:
        limit = int(request.args.get('limit', 100))
        entries = _query()[-limit:] if limit > 0 else []
        return jsonify({'success': True, 'logs': entries, 'total': len(entries), 'memory_total': len(_records)})
    except ValueError as e:
        return jsonify({'success': False, 'error': f"bad limit: {e}"}), 400
    except Exception as e:
        logger.error(f"获取日志失败: {e}")
        return jsonify({'success': False, 'error': str(e)}), 500


@logs_bp.route('/stats', methods=['GET'])
def stats():
    """按模块和级别计数"""
    entries = _query()
    by_module = Counter(e['logger'] for e in entries)
    by_level = Counter(e['level'] for e in entries)
    return jsonify({
        'success': True,
        'modules': dict(by_module.most_common()),
        'levels': dict(by_level),
        'total': len(entries),
    })


@logs_bp.route('/clear_logs', methods=['POST'])
def clear_logs():
    with _records_lock:
        dropped = len(_records)
        _records.clear()
    logger.info(f"内存日志已清空，丢弃 {dropped} 条")
    return jsonify({'success': True, 'cleared': dropped})


@logs_bp.route('/export_logs', methods=['GET'])
def export_logs():
    """纯文本导出，一行一条"""
    try:
        lines = [f"[{e['timestamp']}] {e['level']} {e['logger']} ({e['location']}) - {e['message']}"
                 for e in _query()]
        return jsonify({'success': True, 'content': '\n'.join(lines), 'count': len(lines)})
    except Exception as e:
        logger.error(f"导出日志失败: {e}")
        return jsonify({'success': False, 'error': str(e)}), 500
