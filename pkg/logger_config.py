"""
Logging Configuration for the qbench harness
Provides structured logging for circuit generation, execution, scoring and report events.
"""

import logging
import os
import sys
import json
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler, TimedRotatingFileHandler
from typing import Optional

from bench_config import BenchConfig


class BenchmarkLogger:
    """Structured JSON event logger for benchmark runs"""

    def __init__(self, name: str = 'qbench'):
        self.logger = logging.getLogger(name)
        self._setup_logger()

    def _setup_logger(self):
        """Configure logger with console and rotating file handlers"""
        self.logger.setLevel(logging.DEBUG if os.environ.get('DEBUG') == 'true' else logging.INFO)

        # Prevent duplicate handlers
        if self.logger.handlers:
            return

        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(logging.WARNING if os.environ.get('QBENCH_QUIET') == 'true' else logging.INFO)
        console_handler.setFormatter(logging.Formatter(
            '[%(asctime)s] %(levelname)s in %(module)s: %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        self.logger.addHandler(console_handler)

        if not BenchConfig.LOG_TO_FILE:
            return

        try:
            os.makedirs(BenchConfig.LOG_DIR, exist_ok=True)
        except OSError:
            return

        run_handler = RotatingFileHandler(
            os.path.join(BenchConfig.LOG_DIR, 'qbench.log'),
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5
        )
        run_handler.setLevel(logging.DEBUG)
        run_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        self.logger.addHandler(run_handler)

        error_handler = TimedRotatingFileHandler(
            os.path.join(BenchConfig.LOG_DIR, 'errors.log'),
            when='midnight',
            interval=1,
            backupCount=30
        )
        error_handler.setLevel(logging.WARNING)
        error_handler.setFormatter(logging.Formatter(
            '%(asctime)s - QBENCH - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        self.logger.addHandler(error_handler)

    def _log_event(self, level: str, event_type: str, message: str, **kwargs):
        """Log a structured event with additional context"""
        log_data = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'event_type': event_type,
            'message': message,
            **kwargs
        }
        self.logger.log(getattr(logging, level.upper()), json.dumps(log_data, default=str))

    # Generation and execution events
    def log_circuit_generated(self, family: str, num_qubits: int, num_gates: int, **kwargs):
        """Log a generated benchmark circuit"""
        self._log_event(
            'debug',
            'CIRCUIT_GENERATED',
            f'Generated {family} circuit on {num_qubits} qubits',
            family=family,
            num_qubits=num_qubits,
            num_gates=num_gates,
            **kwargs
        )

    def log_execution(self, backend: str, num_qubits: int, shots: int, exec_time_s: float):
        """Log a completed backend execution"""
        self._log_event(
            'debug',
            'EXECUTION',
            f'Executed {num_qubits}-qubit circuit on {backend}',
            backend=backend,
            num_qubits=num_qubits,
            shots=shots,
            exec_time_s=exec_time_s
        )

    def log_score(self, family: str, problem: str, score: float, passed: Optional[bool] = None):
        """Log a computed score"""
        self._log_event(
            'info',
            'SCORE',
            f'{family} {problem}: score {score:.6g}',
            family=family,
            problem=problem,
            score=score,
            passed=passed
        )

    def log_row_failed(self, family: str, problem: str, reason: str):
        """Log a benchmark row that could not be completed"""
        self._log_event(
            'warning',
            'ROW_FAILED',
            f'Row {family}/{problem} failed: {reason}',
            family=family,
            problem=problem,
            reason=reason
        )

    def log_resource_limit(self, resource: str, requested: int, cap: int):
        """Log a cap violation"""
        self._log_event(
            'warning',
            'RESOURCE_LIMIT',
            f'{resource} {requested} exceeds cap {cap}',
            resource=resource,
            requested=requested,
            cap=cap
        )

    def log_report_written(self, path: str, fmt: str, rows: int):
        """Log an emitted report"""
        self._log_event(
            'info',
            'REPORT_WRITTEN',
            f'Wrote {rows} rows to {path}',
            path=path,
            format=fmt,
            rows=rows
        )

    # Application events
    def log_error(self, error_message: str, exception: Optional[Exception] = None, **kwargs):
        """Log application error"""
        self._log_event(
            'error',
            'APPLICATION_ERROR',
            error_message,
            exception=str(exception) if exception else None,
            **kwargs
        )

    def log_debug(self, message: str, **kwargs):
        """Log debug information"""
        self._log_event('debug', 'DEBUG', message, **kwargs)

    def log_info(self, message: str, **kwargs):
        """Log informational message"""
        self._log_event('info', 'INFO', message, **kwargs)


# Global logger instance
bench_logger = BenchmarkLogger()
