"""Independent units of work with a status instead of exceptions

A grid run is a list of :class:`ActionUnit`, one per replicate, wrapped in an :class:`ActionCollection`.
The collection runs every unit on a shared context object, serially or in worker processes, and
keeps one :class:`ActionStatus` per unit in unit order. A crash in one replicate shows up as an
``ERROR`` status with traceback and does not stop the other replicates.

Units must not share random state: everything a unit draws has to come from seeds it was created with.
"""
import traceback

from joblib import Parallel, delayed

from robquant.log import get_logger
log = get_logger(__name__)


class ActionStatus(object):
    """Outcome of a unit

    Attributes:

        :value: :data:`ActionStatus.SUCCESS`, :data:`ActionStatus.FAILURE`, :data:`ActionStatus.ERROR`
                or None if the unit did not run yet
        :message: what happened
        :traceback: the formatted traceback of a crash, else empty
        :returnvalue: the payload of a successful unit, e.g. the curves of a replicate
    """

    SUCCESS = "Success"
    """The unit produced its result"""

    FAILURE = "Failure"
    "The unit ran but could not produce a usable result."

    ERROR = "Error"
    """The unit raised an exception"""

    def __init__(self, value=None, msg="Not executed.", traceback="", returnvalue=None):
        """
        :param value: the status value
        :type value: str | None
        :param msg: what happened
        :type msg: str
        :param traceback: the formatted traceback
        :type traceback: str
        :param returnvalue: the payload
        :type returnvalue: object
        :raises: None
        """
        self.value = value
        self.message = msg
        self.traceback = traceback
        self.returnvalue = returnvalue

    def __repr__(self):
        return "ActionStatus(%r, %r)" % (self.value, self.message)


def run_action(actionfunc, obj):
    """Call ``actionfunc(obj)`` and return its status, or an ``ERROR`` status if it raised

    Module level, so worker processes can unpickle it.

    :param actionfunc: returns a :class:`ActionStatus`
    :type actionfunc: callable
    :param obj: the shared context
    :type obj: object
    :rtype: :class:`ActionStatus`
    :raises: None
    """
    try:
        status = actionfunc(obj)
        if not isinstance(status, ActionStatus):
            raise TypeError("%s returned %r instead of a ActionStatus" % (actionfunc, status))
    except Exception as e:
        status = ActionStatus(ActionStatus.ERROR, "Unexpected Error: %s" % e, traceback.format_exc())
    return status


class ActionUnit(object):
    """One named unit of work

    ``actionfunc`` has to be picklable to run in a worker process,
    e.g. a :func:`functools.partial` of a module level function.
    """

    def __init__(self, name, description, actionfunc):
        """
        :param name: shown in status messages, e.g. ``"n_train=25 gamma=0.2 shift=3 train=7"``
        :type name: str
        :param description: one line about the unit
        :type description: str
        :param actionfunc: takes the shared context and returns a :class:`ActionStatus`
        :type actionfunc: callable
        :raises: None
        """
        super(ActionUnit, self).__init__()
        self.name = name
        self.description = description
        self.actionfunc = actionfunc
        self.status = ActionStatus()

    def run(self, obj):
        """Run the unit in this process and store its status"""
        self.status = run_action(self.actionfunc, obj)

    def __repr__(self):
        return "ActionUnit(%r, %s)" % (self.name, self.status.value)


class ActionCollection(object):
    """Units that run on the same context; ``actions`` holds them in order"""

    def __init__(self, actions):
        self.actions = list(actions)

    def execute(self, obj, workers=1):
        """Run every unit on ``obj``

        With more than one worker the units run in a joblib process pool.
        Statuses are stored in unit order either way.

        :param obj: the shared context, pickled once per worker task
        :type obj: object
        :param workers: the number of processes
        :type workers: int
        :returns: None
        :rtype: None
        :raises: None
        """
        if workers <= 1 or len(self.actions) < 2:
            for a in self.actions:
                a.run(obj)
            return
        log.debug("Running %s units in %s processes", len(self.actions), workers)
        statuses = Parallel(n_jobs=workers)(delayed(run_action)(a.actionfunc, obj) for a in self.actions)
        for a, s in zip(self.actions, statuses):
            a.status = s

    def results(self):
        """Return the ``returnvalue`` of every unit in order"""
        return [a.status.returnvalue for a in self.actions]

    def status(self):
        """Summarize the units: the first ``ERROR`` wins, then the last ``FAILURE``, else ``SUCCESS``

        :rtype: :class:`ActionStatus`
        :raises: None
        """
        summary = ActionStatus(ActionStatus.SUCCESS, "All actions succeeded.")
        for a in self.actions:
            if a.status.value == ActionStatus.ERROR:
                return ActionStatus(ActionStatus.ERROR, "Error: action \"%s\" raised an error!" % a.name,
                                    a.status.traceback)
            if a.status.value == ActionStatus.FAILURE:
                summary = ActionStatus(ActionStatus.FAILURE, "Action \"%s\" failed: %s" % (a.name, a.status.message))
        return summary
