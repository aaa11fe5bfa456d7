/* Exercises the C interface from plain C. */
#include <carnot/carnot.h>

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void groups(void) {
  carnot_group* g = NULL;
  EXPECT(carnot_group_create("heisenberg-1", &g) == CARNOT_OK);
  EXPECT(strcmp(carnot_group_name(g), "heisenberg-1") == 0);
  EXPECT(carnot_group_dim(g) == 3);
  EXPECT(carnot_group_horizontal_dim(g) == 2);
  EXPECT(carnot_group_step(g) == 2);
  EXPECT(carnot_group_homogeneous_dim(g) == 4);

  /* (1,0,0)(0,1,0): z = -1/2 with [e1, e2] = -e3 */
  const double a[3] = {1, 0, 0}, b[3] = {0, 1, 0};
  double ab[3], ba[3];
  EXPECT(carnot_group_product(g, a, b, ab) == CARNOT_OK);
  EXPECT(carnot_group_product(g, b, a, ba) == CARNOT_OK);
  EXPECT(ab[0] == 1 && ab[1] == 1);
  EXPECT(fabs(ab[2] + ba[2]) < 1e-15 && fabs(ab[2]) == 0.5);
  carnot_group_free(g);

  carnot_group* bad = NULL;
  EXPECT(carnot_group_create("no-such-group", &bad) != CARNOT_OK);
  EXPECT(bad == NULL);
  EXPECT(strlen(carnot_last_error()) > 0);
  EXPECT(carnot_group_from_json("{\"layers\": [2, 1], \"brackets\": []}", &bad) != CARNOT_OK);
  EXPECT(carnot_group_create(NULL, &bad) == CARNOT_ERR_INVALID_ARGUMENT);

  char* names = NULL;
  EXPECT(carnot_preset_names(&names) == CARNOT_OK);
  EXPECT(names != NULL && strstr(names, "engel") != NULL);
  carnot_free_string(names);
  EXPECT(strcmp(carnot_status_name(CARNOT_ERR_UNSUPPORTED_GROUP), "unsupported-group") == 0);
}

static void kernels(void) {
  carnot_group* g = NULL;
  carnot_kernel* k = NULL;
  carnot_group_create("heisenberg-1", &g);
  EXPECT(carnot_kernel_create(g, &k) == CARNOT_OK);
  const double origin[3] = {0, 0, 0};
  double p = 0, grad[2], res = 1;
  EXPECT(carnot_kernel_value(k, 1.0, origin, &p) == CARNOT_OK);
  EXPECT(fabs(p - 1.0 / 16) < 1e-12);
  const double x[3] = {0.5, -0.2, 0.3};
  EXPECT(carnot_kernel_log_gradient(k, 1.0, x, grad) == CARNOT_OK);
  EXPECT(carnot_kernel_pde_residual(k, 1.0, x, &res) == CARNOT_OK);
  EXPECT(fabs(res) < 1e-6);
  EXPECT(carnot_kernel_value(k, -1.0, origin, &p) == CARNOT_ERR_INVALID_ARGUMENT);
  carnot_kernel_free(k);
  carnot_group_free(g);

  carnot_group* engel = NULL;
  carnot_kernel* none = NULL;
  carnot_group_create("engel", &engel);
  EXPECT(carnot_kernel_create(engel, &none) == CARNOT_ERR_UNSUPPORTED_GROUP);
  carnot_group_free(engel);
}

static void simulation(void) {
  carnot_group* g = NULL;
  carnot_group_create("heisenberg-1", &g);
  carnot_mc_options opt;
  carnot_mc_options_default(&opt);
  opt.samples = 4000;
  opt.substeps = 100;
  opt.seed = 3;
  carnot_batch* b = NULL;
  EXPECT(carnot_simulate(g, 1.0, &opt, &b) == CARNOT_OK);
  EXPECT(carnot_batch_size(b) == 4000);
  EXPECT(carnot_batch_dim(b) == 3);
  const double* d = carnot_batch_data(b);
  double m = 0;
  for (size_t i = 0; i < 4000; ++i) m += d[3 * i] * d[3 * i];
  m /= 4000;
  EXPECT(fabs(m - 2.0) < 0.2);

  carnot_batch* again = NULL;
  opt.threads = 2;
  EXPECT(carnot_simulate(g, 1.0, &opt, &again) == CARNOT_OK);
  EXPECT(memcmp(carnot_batch_data(again), d, 4000 * 3 * sizeof(double)) == 0);
  carnot_batch_free(again);
  carnot_batch_free(b);

  opt.samples = 0;
  EXPECT(carnot_simulate(g, 1.0, &opt, &b) == CARNOT_ERR_INVALID_ARGUMENT);
  carnot_group_free(g);
}

static void runs(void) {
  char* report = NULL;
  carnot_verdict v = CARNOT_VERDICT_FAIL;
  EXPECT(carnot_run("rp-check", "{\"group\": \"abelian-2\", \"corpus\": 2, \"points\": 2, \"lambda\": 0.5}", &report,
                    &v) == CARNOT_OK);
  EXPECT(v == CARNOT_VERDICT_PASS);
  /* config is the first key */
  EXPECT(report != NULL && strncmp(report, "{\n  \"config\":", 13) == 0);
  carnot_free_string(report);

  report = NULL;
  EXPECT(carnot_run("rp-check", "{\"bogus\": 1}", &report, &v) == CARNOT_ERR_INVALID_ARGUMENT);
  EXPECT(report == NULL);
  EXPECT(strstr(carnot_last_error(), "bogus") != NULL);
  EXPECT(carnot_run("rp-check", "{not json", &report, &v) == CARNOT_ERR_INVALID_ARGUMENT);
  EXPECT(carnot_run("nothing", NULL, &report, &v) == CARNOT_ERR_INVALID_ARGUMENT);
}

int main(void) {
  EXPECT(strlen(carnot_version()) > 0);
  groups();
  kernels();
  simulation();
  runs();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("c api: all checks passed\n");
  return failures != 0;
}
