"""Tools to find rule sets and reporters by name.
"""

import logging


class FindBuiltinRuleSet:

    def lookup(self, name):
        _ = self
        from stepup_ramsey.core import stepup  # pylint: disable=import-outside-toplevel
        return stepup.RULE_SETS.get(name)

    def __call__(self, name):
        return self.lookup(name)


class FindBuiltinReporter:

    def lookup(self, name):
        _ = self
        from stepup_ramsey.core import reporters  # pylint: disable=import-outside-toplevel
        return getattr(reporters, name, None)

    def __call__(self, name):
        return self.lookup(name)


class _Finder:
    """Look a name up through an ordered chain of lookup functors."""

    _lookup_funcs = {}
    kind = 'item'

    @classmethod
    def add_lookup_functor(cls, name, functor):
        if name in cls._lookup_funcs:
            raise ValueError(f'Lookup function {name} already exists.')
        cls._lookup_funcs[name] = functor

    @classmethod
    def del_lookup_functor(cls, name):
        cls._lookup_funcs.pop(name, None)

    @classmethod
    def find(cls, name):
        for functor_name, functor in cls._lookup_funcs.items():
            logging.debug('Looking up %s %s using %s', cls.kind, name,
                          functor_name)
            result = functor(name)
            if result is not None:
                return result
        raise KeyError(name)


class RuleSetFinder(_Finder):
    """Registry of red-rule sets used by StepColoring."""

    _lookup_funcs = {
        '__default__': FindBuiltinRuleSet()
        }
    kind = 'rule set'

    @classmethod
    def find_rule_set(cls, name):
        return cls.find(name)


class ReporterFinder(_Finder):

    _lookup_funcs = {
        '__default__': FindBuiltinReporter()
        }
    kind = 'reporter'

    @classmethod
    def find_reporter(cls, name):
        return cls.find(name)
