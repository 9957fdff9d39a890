from flask import request, jsonify
import logging

from src.api.codec import parse_input, serialize
from src.api.runner import run
from src.errors import ToolkitError


def register_routes(app):
    """Register all application routes."""

    @app.route('/api/ping')
    def ping():
        return jsonify({'status': 'success'})

    @app.route('/api/run', methods=['POST'])
    def run_job():
        """Run one job document; the body is the same JSON the command line reads."""
        try:
            job = parse_input(request.get_data())
            report = run(job)
            logging.info(f"Job {job.command.value} finished: {report.status.value}")
            return app.response_class(serialize(report.to_dict()), mimetype='application/json')

        except ToolkitError as e:
            logging.warning(f"Rejected job: {e}")
            return jsonify({'status': 'error', **e.to_dict()}), 400

        except Exception as e:
            logging.error(f"Error running job: {str(e)}")
            return jsonify({
                'status': 'error',
                'message': f"Error running job: {str(e)}"
            }), 500
