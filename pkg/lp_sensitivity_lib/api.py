from .core.analysis import (analyze, bundled_instances, corpus_names,
                            load_instance, render_comparison, render_report,
                            reproduce)
from .core.bqp import build
from .core.environment import ExecutionEnvironment
from .core.heuristics import oracle_vertices, sample_bounds, write_trial_log
from .core.relaxation import RelaxationOptions, build_relaxation, dump_conic
from .core.uncertainty import build_restricted
from .enums import ReportFormatEnum, SenseEnum, SettingEnum


class LPSensitivityAPI:
    def __init__(self):
        # The constructor should be where you initialize
        # the environment and its parameters
        self._env = ExecutionEnvironment()

    def load(self, path):
        """Load an instance file or a bundled instance by name.

        Args:
            path (string)

        Returns:
            Instance
        """
        return load_instance(path)

    def analyze(self, instance, **options):
        """Bound the best- and worst-case optimal values.

        Args:
            instance (Instance|string): instance or path/bundled name
            options: complementarity, rlt, soc_rlt, samples, seed, oracle,
                ablation, force_relaxation, improvement_rounds, jobs

        Returns:
            AnalysisReport
        """
        if isinstance(instance, str):
            instance = self.load(instance)
        return analyze(instance, options)

    def render(self, report, fmt=ReportFormatEnum.TEXT, include_timings=None):
        """Render a report as a text table or key=value lines."""
        return render_report(report, fmt, include_timings)

    def reproduce(self, corpus, seed=0, jobs=None, samples=None):
        """Run a regression corpus against its expected values.

        Returns:
            CorpusResult: exit_code is 0 iff every assertion passed
        """
        return reproduce(corpus, seed=seed, jobs=jobs, samples=samples)

    def render_comparison(self, result):
        return render_comparison(result)

    def oracle(self, instance):
        """Exact (q-, q+) by vertex enumeration of a polytopal set.

        Returns:
            tuple: (q_minus, q_plus, exact)

        Raises:
            NonPolytopalSetError
        """
        if isinstance(instance, str):
            instance = self.load(instance)
        return oracle_vertices(instance.lp, instance.uncertainty_set)

    def sample(self, instance, samples=None, seed=0, jobs=None,
               trial_log=None):
        """Extreme-point sampling of the restricted set.

        Args:
            trial_log (string): optional CSV path for the trials

        Returns:
            SampleRun
        """
        if isinstance(instance, str):
            instance = self.load(instance)
        system = build_restricted(instance.uncertainty_set, instance.lp)
        run = sample_bounds(
            instance.lp, instance.uncertainty_set, T=samples, seed=seed,
            jobs=jobs, system=system,
        )
        if trial_log:
            write_trial_log(trial_log, run.trials)
        return run

    def dump_conic(self, instance, sense, path, complementarity=True,
                   rlt=True, soc_rlt=True):
        """Write the relaxation program of one side as a text dump.

        Args:
            instance (Instance|string)
            sense (SenseEnum)
            path (string)

        Returns:
            string: path written
        """
        if isinstance(instance, str):
            instance = self.load(instance)
        qp = build(instance.lp, instance.uncertainty_set, SenseEnum(sense))
        program = build_relaxation(qp, RelaxationOptions(
            use_complementarity=complementarity, rlt=rlt, soc_rlt=soc_rlt
        ))
        return dump_conic(program, path)

    def get_settings(self):
        """Current settings.

        Returns:
            dict: SettingEnum -> value
        """
        return self._env.settings.get_user_settings()

    def set_setting(self, key, value):
        """Persist one setting.

        Args:
            key (SettingEnum|string)
            value: coerced to the setting's type
        """
        key = SettingEnum(key)
        self._env.settings.set(key, value)
        self._env.reset()

    def reset_settings(self):
        """Reset settings to the defaults."""
        self._env.settings.reset_to_default_configs()
        self._env.reset()

    def instances(self):
        return bundled_instances()

    def corpora(self):
        return corpus_names()


lp_sensitivity = LPSensitivityAPI() # noqa
