"""Reporters that emit JSON results to the terminal or a file.
"""

import json
import logging

import click
from pydantic import BaseModel


def shorten_msg(msg, max_len=400, max_lines=6):
    short_msg = msg[:max_len]
    short_msg = '\n'.join(short_msg.split('\n')[:max_lines])
    if short_msg != msg:
        short_msg += '...'
    return short_msg


def to_jsonable(payload):
    """Convert pydantic models (possibly nested in containers) to JSON data."""
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode='json', by_alias=True)
    if isinstance(payload, dict):
        return {str(k): to_jsonable(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [to_jsonable(item) for item in payload]
    return payload


class Reporter:

    def __init__(self, **kwargs):
        if kwargs:
            logging.warning('Ignoring kwargs: %s', kwargs)

    def format_result_to_msg(self, result):
        _ = self
        return json.dumps(to_jsonable(result), indent=2, sort_keys=True)

    def report(self, result):
        msg = self.format_result_to_msg(result)
        logging.debug('Reporting %s', shorten_msg(msg))
        self.report_message(msg)
        return msg

    def report_message(self, msg):
        raise NotImplementedError


class EchoReporter(Reporter):
    """Write JSON results to standard output."""

    def report_message(self, msg):
        click.echo(msg)


class FileReporter(Reporter):
    """Reporter that just puts output in a file.
    """

    def __init__(self, path, **kwargs):
        super().__init__(**kwargs)
        self.path = path

    def report_message(self, msg):
        with open(self.path, 'w', encoding='utf8') as fdesc:
            fdesc.write(msg + '\n')
