import json

from reachsched.basic.exceptions import ConfigError


def load_json_file(filename):
    """ Load the JSON document ``filename``.

    :param filename: path to the file to be loaded
    :type filename: str
    :return: the parsed document
    :raises ConfigError: if the file is not valid JSON
    """
    with open(filename, 'r') as f:
        try:
            return json.load(f)
        except ValueError as ex:
            raise ConfigError("{} is not valid JSON: {}".format(filename, ex))
