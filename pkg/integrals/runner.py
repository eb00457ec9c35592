from .exceptions import SpecValidationError
from .spec_file import load_document
from .tasks import ApproxTableTask, CompareTask, GenerateTask, IntegrateTask

TASK_CLASSES = {
    "integrate_mi": IntegrateTask,
    "integrate_bochner": IntegrateTask,
    "compare": CompareTask,
    "approx_table": ApproxTableTask,
}


def task_class_for(spec_path):
    """Task class for the task a spec file declares (IntegrateTask when unreadable).

    An unreadable or malformed file still goes to a task, which then reports
    the validation error and sets the exit code.
    """
    try:
        document = load_document(spec_path)
    except SpecValidationError:
        return IntegrateTask
    if not isinstance(document, dict):
        return IntegrateTask
    task = document.get("task", "integrate_mi")
    if not isinstance(task, str):
        return IntegrateTask
    return TASK_CLASSES.get(task, IntegrateTask)


def run_spec(spec_path, task_class=None, parameters=None, output=None, **options):
    """Run a spec file and write its report.

    Args:
        spec_path (str or Path): JSON spec file
        task_class (type, optional): force a task class; by default the file's task decides
        parameters (dict, optional): values overriding the file's `parameters`
        output (file, optional): report stream. Defaults to stdout.

    Returns:
        int: 0 on success, 1 on validation error, 2 on computation error
    """
    task_class = task_class or task_class_for(spec_path)
    task = task_class(output)
    task.run(spec_path, parameters, **options)
    return task.exit_code


def run_generate(family, seed, count, output=None):
    """Write `count` generated cases (seeds seed, seed + 1, ...); returns the exit code."""
    task = GenerateTask(output)
    task.run(family, seed, count)
    return task.exit_code
