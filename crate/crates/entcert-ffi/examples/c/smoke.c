#include <stdio.h>
#include <assert.h>
#include <math.h>
#include "entcert.h"

int main(void) {
    EcState *state = NULL;
    EcStatus status = ec_state_new("rho_w", 2, 0.9, &state);
    assert(status == EC_STATUS_OK);
    assert(ec_state_local_dim(state) == 2);

    EcCertification cert;
    status = ec_certify_mi(state, "comp,sx", 1, 0, 0, &cert);
    assert(status == EC_STATUS_OK);
    assert(cert.verdict == EC_VERDICT_ENTANGLED);
    assert(fabs(cert.sum - 1.4272) < 1e-3);

    double crossing = 0.0;
    assert(ec_werner_threshold_crossing(2, &crossing) == EC_STATUS_OK);
    assert(fabs(crossing - 0.779944) < 1e-4);

    EcState *bad = NULL;
    assert(ec_state_new("nope", 2, 0.5, &bad) == EC_STATUS_PARAM);
    printf("last error: %s\n", ec_last_error_message());

    ec_state_free(state);
    printf("C smoke test OK: sum=%.6f verdict=%d crossing=%.6f version=%s\n",
           cert.sum, cert.verdict, crossing, ec_version());
    return 0;
}
