#!/usr/bin/env python
"""This is the launcher for all robquant command line operations

This launcher is used for the console_scripts entry point of setuptools.
For useage execute::

  robquant -h

This requires robquant to be installed via setuptools (pip will do that for you). You can also execute this script directly.

Every subcommand reads the run config given with ``--config`` (or the defaults) and lets flags override it.
Errors are reported as one line on stderr and mapped to the exit codes in :data:`robquant.constants.EXIT_CODES`.
"""
import argparse
import os
import sys

from robquant import errors, log
from robquant import categorical, experiment, iniconf, nbc, report, synthetic, uncertainty
from robquant.constants import EXIT_CODES, loglvl_mapping


def cell_type(value):
    """Parse ``N,G`` into ``(n_train, gamma)``

    :raises: :class:`argparse.ArgumentTypeError`
    """
    try:
        n, g = value.split(',')
        return int(n), float(g)
    except ValueError:
        raise argparse.ArgumentTypeError("expected N_TRAIN,GAMMA like 100,0 but got %r" % value)


def replicates_type(value):
    """Parse ``S,T`` into ``(shifts, train_sets)``

    :raises: :class:`argparse.ArgumentTypeError`
    """
    try:
        s, t = (int(v) for v in value.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError("expected SHIFTS,TRAIN_SETS like 10,10 but got %r" % value)
    if s < 1 or t < 1:
        raise argparse.ArgumentTypeError("replicate counts have to be positive, got %r" % value)
    return s, t


def _float_in(value, name, low, high, low_open, high_open):
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("%s has to be a number, got %r" % (name, value))
    above = x > low if low_open else x >= low
    below = x < high if high_open else x <= high
    if not (above and below):
        raise argparse.ArgumentTypeError("%s has to be in %s%s, %s%s, got %r"
                                         % (name, "(" if low_open else "[", low, high, ")" if high_open else "]",
                                            value))
    return x


def credal_eps_type(value):
    """Parse a contamination in ``[0, 1)``

    :raises: :class:`argparse.ArgumentTypeError`
    """
    return _float_in(value, "contamination", 0.0, 1.0, False, True)


def alpha_type(value):
    """Parse a smoothing value ``>= 0``

    :raises: :class:`argparse.ArgumentTypeError`
    """
    return _float_in(value, "alpha", 0.0, float('inf'), False, True)


def rate_type(value):
    """Parse an acceptance rate in ``(0, 1]``

    :raises: :class:`argparse.ArgumentTypeError`
    """
    return _float_in(value, "acceptance rate", 0.0, 1.0, True, False)


def workers_type(value):
    """Parse a positive number of processes

    :raises: :class:`argparse.ArgumentTypeError`
    """
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("workers has to be an integer, got %r" % value)
    if n < 1:
        raise argparse.ArgumentTypeError("workers has to be at least 1, got %r" % value)
    return n


def exit_code(exc):
    """Return the exit code for an exception by walking its class hierarchy"""
    for cls in type(exc).__mro__:
        if cls.__name__ in EXIT_CODES:
            return EXIT_CODES[cls.__name__]
    return 1


class Launcher(object):
    """Provides commands and handles argument parsing
    """

    def __init__(self, ):
        """Initialize parsers

        :raises: None
        """
        super(Launcher, self).__init__()
        self.parser = self.setup_core_parser()
        self.subparsers = self.setup_cmd_subparsers(self.parser)
        common = self.setup_common_parser()
        synthp = self.subparsers.add_parser("synth", parents=[common],
                                            help="Write the synthetic distributions as CSV tables.")
        fitp = self.subparsers.add_parser("fit", parents=[common],
                                          help="Learn a Naive Bayes classifier from a dataset CSV.")
        scorep = self.subparsers.add_parser("score", parents=[common],
                                            help="Score feature vectors with a saved model.")
        experimentp = self.subparsers.add_parser("experiment", parents=[common],
                                                 help="Run the experiment grid and write curves and figures.")
        reportp = self.subparsers.add_parser("report", parents=[common],
                                             help="Re-render figures and print a summary from a curves CSV.")
        self.setup_synth_parser(synthp)
        self.setup_fit_parser(fitp)
        self.setup_score_parser(scorep)
        self.setup_experiment_parser(experimentp)
        self.setup_report_parser(reportp)

    def setup_core_parser(self, ):
        """Setup the core parser with the global flags

        :returns: the parser
        :rtype: :class:`argparse.ArgumentParser`
        :raises: None
        """
        parser = argparse.ArgumentParser(prog="robquant",
                                         description="Robustness and uncertainty of Naive Bayes predictions.")
        parser.add_argument("--config", help="run config ini file. Flags override its values.")
        parser.add_argument("--log-level", choices=sorted(loglvl_mapping), help="level of the console log")
        parser.add_argument("--workers", type=workers_type, help="number of processes for the experiment grid")
        return parser

    def setup_cmd_subparsers(self, parser):
        """Add a subparser for commands to the given parser

        :param parser: the argument parser to setup
        :type parser: :class:`argparse.ArgumentParser`
        :returns: the subparser action object
        :rtype: action object
        :raises: None
        """
        subparsers = parser.add_subparsers(title="commands", dest="command",
                                           help="available commands")
        subparsers.required = True
        return subparsers

    def setup_common_parser(self, ):
        """Return a parent parser with the flags of every command

        :rtype: :class:`argparse.ArgumentParser`
        :raises: None
        """
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, help="master seed. Overrides master_seed of the config.")
        return common

    def load_config(self, args):
        """Return the run config with the flags applied

        :param args: parsed arguments
        :type args: Namespace
        :rtype: :class:`robquant.iniconf.RunConfig`
        :raises: :class:`robquant.errors.ConfigError`
        """
        overrides = {'master_seed': args.seed, 'workers': args.workers}
        return iniconf.RunConfig.from_file(args.config, overrides)

    def setup_synth_parser(self, parser):
        """Setup the given parser for the synth command

        :param parser: the argument parser to setup
        :type parser: :class:`argparse.ArgumentParser`
        :returns: None
        :rtype: None
        :raises: None
        """
        parser.set_defaults(func=self.synth)
        parser.add_argument("--out", help="output directory. Defaults to output_dir of the config.")

    def synth(self, args):
        """Write P_fix, P_rand, P_test and a P_train for every gamma and shift of the config

        :param args: arguments from the synth parser
        :type args: Namespace
        :returns: None
        :rtype: None
        :raises: :class:`robquant.errors.ConfigError`, :class:`robquant.errors.ExportError`
        """
        config = self.load_config(args)
        if config.master_seed is None:
            raise errors.ConfigError("synth needs a seed: pass --seed or set master_seed")
        out = args.out or config.output_dir
        _makedirs(out)
        master = config.master_seed
        gen = synthetic.GeneratorConfig(config.domain, config.beta, config.class_probs, config.peak,
                                        categorical.derive_seed(master, experiment.STREAM_RANDOM))
        test = synthetic.make_test(gen)
        categorical.write_joint_csv(synthetic.make_fixed(gen), os.path.join(out, 'p_fix.csv'))
        categorical.write_joint_csv(synthetic.make_random(gen.domain, gen.seed), os.path.join(out, 'p_rand.csv'))
        categorical.write_joint_csv(test, os.path.join(out, 'p_test.csv'))
        for g in config.gamma:
            for s in range(config.shifts):
                train, tv = synthetic.make_train(test, g, experiment.shift_seed(master, g, s))
                categorical.write_joint_csv(train, os.path.join(out, 'p_train_gamma%g_shift%s.csv' % (g, s)))
        log.get_logger(__name__).info("Wrote distributions to %s", out)

    def setup_fit_parser(self, parser):
        """Setup the given parser for the fit command

        :param parser: the argument parser to setup
        :type parser: :class:`argparse.ArgumentParser`
        :returns: None
        :rtype: None
        :raises: None
        """
        parser.set_defaults(func=self.fit)
        parser.add_argument("--data", required=True, help="dataset CSV with header class,f1,...,fN")
        parser.add_argument("--out", required=True, help="model file to write")
        parser.add_argument("--alpha", type=alpha_type, help="smoothing. Selected by cross validation if omitted.")

    def fit(self, args):
        """Learn a model and save it

        :param args: arguments from the fit parser
        :type args: Namespace
        :returns: None
        :rtype: None
        :raises: :class:`robquant.errors.RobquantException`
        """
        config = self.load_config(args)
        data = categorical.read_dataset_csv(args.data, config.domain)
        alpha = args.alpha
        if alpha is None:
            seed = config.master_seed if config.master_seed is not None else 0
            alpha, cv = nbc.select_alpha(data, config.alpha_grid, config.folds, seed)
            log.get_logger(__name__).info("Selected alpha %s with cv accuracy %s", alpha, max(cv))
        nbc.save_model(nbc.fit(data, alpha), args.out)

    def setup_score_parser(self, parser):
        """Setup the given parser for the score command

        :param parser: the argument parser to setup
        :type parser: :class:`argparse.ArgumentParser`
        :returns: None
        :rtype: None
        :raises: None
        """
        parser.set_defaults(func=self.score)
        parser.add_argument("--model", required=True, help="model file written by the fit command")
        parser.add_argument("--instances", required=True,
                            help="CSV with header f1,...,fN or class,f1,...,fN")
        parser.add_argument("--out", required=True, help="report CSV to write")
        parser.add_argument("--train", help="dataset CSV to bootstrap the ensemble metrics from")
        parser.add_argument("--credal-eps", type=credal_eps_type, help="add credal predictions at this contamination")

    def score(self, args):
        """Score every feature vector and write a report

        :param args: arguments from the score parser
        :type args: Namespace
        :returns: None
        :rtype: None
        :raises: :class:`robquant.errors.RobquantException`
        """
        config = self.load_config(args)
        model = nbc.load_model(args.model)
        features, classes = categorical.read_instances_csv(args.instances, model.domain, require_class=False)
        ensemble = None
        if args.train:
            train = categorical.read_dataset_csv(args.train, model.domain)
            seed = config.master_seed if config.master_seed is not None else 0
            ensemble = uncertainty.fit_ensemble(train, model.alpha, config.m_ensemble, seed)
        result = experiment.score(model, features, classes, ensemble, config.bisection_tol, args.credal_eps)
        report.write_report_csv(result, args.out)

    def setup_experiment_parser(self, parser):
        """Setup the given parser for the experiment command

        :param parser: the argument parser to setup
        :type parser: :class:`argparse.ArgumentParser`
        :returns: None
        :rtype: None
        :raises: None
        """
        parser.set_defaults(func=self.experiment)
        parser.add_argument("--out", help="output directory. Defaults to output_dir of the config.")
        parser.add_argument("--cell", type=cell_type, action="append",
                            help="N_TRAIN,GAMMA of a cell to run. Repeat for more cells. Defaults to the full grid.")
        parser.add_argument("--replicates", type=replicates_type,
                            help="SHIFTS,TRAIN_SETS per cell. Defaults to the config.")
        parser.add_argument("--step", type=rate_type, help="thin the curves CSV to multiples of this acceptance rate")

    def experiment(self, args):
        """Run the grid and export curves, figures and the summary at rate 0.2

        :param args: arguments from the experiment parser
        :type args: Namespace
        :returns: None
        :rtype: None
        :raises: :class:`robquant.errors.RobquantException`
        """
        config = self.load_config(args)
        if config.master_seed is None:
            raise errors.ConfigError("experiment needs a seed: pass --seed or set master_seed")
        shifts, train_sets = args.replicates or (None, None)
        stats = experiment.run_grid(config, args.cell, config.workers, shifts, train_sets)
        out = args.out or config.output_dir
        report.export_reports(stats, out, args.step)
        summary = experiment.summarize(stats)
        report.write_csv(summary, os.path.join(out, 'summary.csv'))

    def setup_report_parser(self, parser):
        """Setup the given parser for the report command

        :param parser: the argument parser to setup
        :type parser: :class:`argparse.ArgumentParser`
        :returns: None
        :rtype: None
        :raises: None
        """
        parser.set_defaults(func=self.report)
        parser.add_argument("--curves", required=True, help="curves CSV written by the experiment command")
        parser.add_argument("--out", help="directory for the figures. Defaults to the directory of the CSV.")
        parser.add_argument("--rate", type=rate_type, default=0.2, help="acceptance rate of the summary table")

    def report(self, args):
        """Render the figures of a curves CSV and print the summary table

        :param args: arguments from the report parser
        :type args: Namespace
        :returns: None
        :rtype: None
        :raises: :class:`robquant.errors.RobquantException`
        """
        stats = report.read_curves_csv(args.curves)
        out = args.out or os.path.dirname(os.path.abspath(args.curves))
        _makedirs(out)
        if stats.cells:
            for which in ('mean', 'std'):
                report.plot_grid(stats, os.path.join(out, 'curves_%s.svg' % which), which)
        summary = experiment.summarize(stats, args.rate)
        print(summary.to_string(index=False))

    def parse_args(self, args=None):
        """Parse the given arguments

        All commands support executing a function,
        so you can use the arg Namespace like this::

          launcher = Launcher()
          args = launcher.parse_args()
          args.func(args) # execute the command

        Unknown arguments are an error.

        :param args: arguments to pass
        :type args: list | None
        :returns: the parsed arguments
        :rtype: Namespace
        :raises: SystemExit
        """
        if args is None:
            args = sys.argv[1:]
        return self.parser.parse_args(args)


def _makedirs(path):
    try:
        if not os.path.isdir(path):
            os.makedirs(path)
    except OSError as e:
        raise errors.ExportError(str(e), path)


def main_func(args=None):
    """Main funcion when executing this module as script

    :param args: commandline arguments
    :type args: list
    :returns: None
    :rtype: None
    :raises: SystemExit with a non zero code on errors
    """
    launcher = Launcher()
    parsed = launcher.parse_args(args)
    if parsed.log_level:
        log.set_level(parsed.log_level)
    try:
        parsed.func(parsed)
    except errors.RobquantException as e:
        sys.stderr.write("robquant: error: %s\n" % " ".join(str(e).split()))
        sys.exit(exit_code(e))


if __name__ == '__main__':
    main_func()
