#include <stdio.h>
#include <string.h>
#include "cnpf.h"

int main(void) {
    CnpfKernel *k = NULL;
    if (cnpf_kernel_from_json("{\"family\": \"szego\"}", &k) != CNPF_STATUS_OK) return 10;
    double z[2] = {0.5, 0.0}, out[2];
    if (cnpf_kernel_eval(k, z, z, 1, out) != CNPF_STATUS_OK) return 11;
    cnpf_kernel_free(k);
    if (out[0] < 1.3333333333 || out[0] > 1.3333333334) return 12;

    CnpfRun *run = NULL;
    if (cnpf_run("factorize", NULL, "h2-half-one-plus-z", &run) != CNPF_STATUS_OK) return 13;
    int code = cnpf_run_exit_code(run);
    if (strstr(cnpf_run_report(run), "\"passed\": true") == NULL) return 14;
    cnpf_run_free(run);

    if (cnpf_run("nope", NULL, NULL, &run) != CNPF_STATUS_INVALID_ARGUMENT) return 15;
    printf("%s\n", cnpf_last_error());
    return code;
}
