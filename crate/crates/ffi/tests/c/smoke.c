#include <stdio.h>
#include <string.h>

#include "pa_spectra.h"

int main(void) {
    PaConfig *cfg = NULL;
    if (pa_config_parse("species.name = Na\ntrap.omega_khz = 100\n", &cfg) != PA_STATUS_OK) {
        return 1;
    }
    double x[3];
    if (pa_trap_energies(cfg, 100.0, x, 3) != PA_STATUS_OK) {
        return 2;
    }
    printf("%.6f %.6f %.6f\n", x[0], x[1], x[2]);

    PaConfig *bad = NULL;
    if (pa_config_parse("bogus.key = 1\n", &bad) != PA_STATUS_CONFIG || bad != NULL) {
        return 3;
    }
    char msg[256];
    size_t n = pa_last_error_message(msg, sizeof msg);
    if (n == 0 || strstr(msg, "unknown key") == NULL) {
        return 4;
    }
    pa_config_free(cfg);
    return 0;
}
