/* End-to-end smoke test of the dnls_lab C interface: build a solitary wave,
 * check its functionals, classify a scaled copy, certify it, and evolve it.
 *
 * Build from the workspace root:
 *
 *   cargo build --release -p dnls-lab-ffi
 *   cc -std=c99 -Wall -Wextra -I crates/dnls-lab-ffi/include \
 *      crates/dnls-lab-ffi/examples/smoke.c \
 *      target/release/libdnls_lab_ffi.a -lm -o smoke
 *   ./smoke
 *
 * (Older toolchains may also need -lpthread -ldl after the static library.)
 */
#include <assert.h>
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include "dnls_lab.h"

static void check(DnlsStatus status, const char *what) {
  if (status != DNLS_STATUS_OK) {
    char msg[256];
    dnls_last_error_message(msg, sizeof msg);
    fprintf(stderr, "%s failed (%d): %s\n", what, (int)status, msg);
    exit(1);
  }
}

int main(void) {
  printf("library version %s\n", dnls_version());

  DnlsField *wave = NULL;
  check(dnls_soliton_profile(1.0, 0.0, 1024, 20.0, &wave), "profile");
  assert(dnls_field_len(wave) == 1024);

  DnlsFunctionalReport report;
  check(dnls_functionals(wave, 1.0, 0.0, &report), "functionals");
  double pi = 3.14159265358979323846;
  assert(fabs(report.mass - pi) < 1e-9);
  assert(fabs(report.nehari) < 1e-6);

  /* A quarter-amplitude copy falls into K+. */
  size_t n = dnls_field_len(wave);
  double *re = malloc(n * sizeof *re), *im = malloc(n * sizeof *im);
  check(dnls_field_copy_samples(wave, re, im), "copy");
  for (size_t j = 0; j < n; j++) { re[j] *= 0.25; im[j] *= 0.25; }
  DnlsField *small = NULL;
  check(dnls_field_from_samples(n, 20.0, re, im, &small), "rebuild");
  DnlsClassification verdict;
  check(dnls_classify(small, 1.0, 0.0, &verdict), "classify");
  assert(verdict.set == DNLS_CLASS_SET_K_PLUS);

  DnlsCertificate certificate;
  check(dnls_certify(small, &certificate), "certify");
  assert(certificate.condition == DNLS_CONDITION_MASS_BELOW_TWO_PI);

  DnlsDriftSummary drift;
  DnlsField *evolved = NULL;
  check(dnls_evolve(small, 1.0, 0.0, 0.05, 1e-3, true, DNLS_FORM_U, &drift, &evolved),
        "evolve");
  assert(drift.mass < 1e-10);

  /* Domain errors surface as statuses with readable messages. */
  double mass;
  DnlsStatus status = dnls_soliton_mass(1.0, 5.0, &mass);
  assert(status == DNLS_STATUS_UNSUPPORTED_REGIME);

  dnls_field_free(wave);
  dnls_field_free(small);
  dnls_field_free(evolved);
  free(re);
  free(im);
  printf("C smoke test passed\n");
  return 0;
}
