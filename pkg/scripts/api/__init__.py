class Commands:
    entangler = "entangler"
    cnot = "cnot"
    deutsch = "deutsch"
    grover = "grover"
    dephase = "dephase"
    buscheck = "buscheck"
    compile = "compile"
    run_schedule = "run-schedule"


class ExitCodes:
    SUCCESS = 0
    VALIDATION = 2
    NUMERICAL_CAP = 3
