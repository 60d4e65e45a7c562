from . import df, gen_data, solve, sure_path, validate

COMMANDS = (solve, df, validate, sure_path, gen_data)
