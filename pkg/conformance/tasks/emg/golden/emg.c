/* emg.c
 * Self-contained hypervector classifier generated by hdc2c.
 * Description: EMG, 64 dimensions, seed 13,
 * 16-byte vector registers.
 * Tables are rebuilt at startup from the seed; the same
 * description always reproduces this file byte for byte.
 */

#define HD_DIMENSIONS 64
#define HD_PAD_DIMS 64
#define HD_NUM_BATCH 16
#define HD_LANES 4
#define HD_VECTOR_SIZE 16
#define HD_INPUT_DIM 8
#define HD_CLASSES 3
#define HD_TRAIN_SIZE 24
#define HD_TEST_SIZE 12
#define HD_WEIGHT_ITEMS 8
#define HD_MIN_ACT 1
#define HD_INT_FEATURES 0
#define HD_ENC_BUFS 1
#define HD_PARALLEL 0

#include "hdc_runtime.h"

static int32_t *hd_tab_SIGNALS;
static int32_t *hd_tab_CHANNELS;

static void hd_setup_tables(uint64_t seed)
{
    uint64_t st;
    hd_tab_SIGNALS = hd_alloc((size_t)8 * HD_PAD_DIMS * sizeof(int32_t));
    st = hd_stream_state(seed, 0);
    hd_fill_level(hd_tab_SIGNALS, 8, &st);
    hd_tab_CHANNELS = hd_alloc((size_t)8 * HD_PAD_DIMS * sizeof(int32_t));
    st = hd_stream_state(seed, 1);
    hd_fill_random(hd_tab_CHANNELS, 8, &st);
}

static void hd_encode(int32_t **bufs, const hd_feat_t *x, const long *act,
                      long n_act, double lo, double hi, int32_t *out)
{
    (void)bufs;
    (void)x;
    (void)act;
    (void)n_act;
    (void)lo;
    (void)hi;
    hd_vec_zero(bufs[0]);
    {
        long t;
        for (t = 0; t < n_act; ++t) {
            long p = act[t];
            hd_vec_mac(bufs[0], hd_tab_CHANNELS + p * HD_PAD_DIMS, hd_tab_SIGNALS + hd_map_range(x[p], lo, hi, HD_WEIGHT_ITEMS) * HD_PAD_DIMS);
        }
    }
    hd_rotate(out, bufs[0], 1);
}

/* Single-threaded driver: stream samples, encode, accumulate, classify. */

static int32_t *hd_bufs[HD_ENC_BUFS];
static int64_t *hd_counts;
static double hd_norms[HD_CLASSES];

static void hd_usage(const char *prog)
{
    fprintf(stderr,
            "usage: %s <train_data> <train_labels> <test_data> <test_labels> [min max]\n",
            prog);
}

int main(int argc, char **argv)
{
    double lo = -1.0, hi = 1.0;
    double t0, gen_s, train_s, test_s;
    long correct = 0;
    long s, k, n_act;
    FILE *fd, *fl;
    char *line_buf;
    hd_feat_t *row;
    long *act;
    long *preds;
    int32_t *enc;

    if (argc != 5 && argc != 7) {
        hd_usage(argv[0]);
        return 1;
    }
    if (argc == 7) {
        char *end;
        lo = strtod(argv[5], &end);
        if (*end != '\0') {
            hd_usage(argv[0]);
            return 1;
        }
        hi = strtod(argv[6], &end);
        if (*end != '\0' || !(lo < hi)) {
            hd_usage(argv[0]);
            return 1;
        }
    }

    t0 = hd_now();
    hd_setup_tables((uint64_t)13ULL);
    for (k = 0; k < HD_ENC_BUFS; ++k)
        hd_bufs[k] = hd_alloc((size_t)HD_PAD_DIMS * sizeof(int32_t));
    hd_counts = hd_alloc((size_t)HD_CLASSES * HD_DIMENSIONS * sizeof(int64_t));
    enc = hd_alloc((size_t)HD_PAD_DIMS * sizeof(int32_t));
    line_buf = malloc(HD_LINE_CAP);
    row = malloc((size_t)HD_INPUT_DIM * sizeof(hd_feat_t));
    act = malloc((size_t)HD_INPUT_DIM * sizeof(long));
    preds = malloc((size_t)HD_TEST_SIZE * sizeof(long));
    if (line_buf == NULL || row == NULL || act == NULL || preds == NULL) {
        fprintf(stderr, "out of memory\n");
        return 2;
    }
    gen_s = hd_now() - t0;

    t0 = hd_now();
    fd = hd_open(argv[1]);
    fl = hd_open(argv[2]);
    for (s = 0; s < HD_TRAIN_SIZE; ++s) {
        long label;
        hd_read_row(fd, argv[1], s + 1, line_buf, row);
        label = hd_read_label(fl, argv[2], s + 1);
        n_act = hd_active(row, act);
        if (n_act < HD_MIN_ACT)
            hd_data_fail(argv[1], s + 1, "too few active features");
        hd_encode(hd_bufs, row, act, n_act, lo, hi, enc);
        hd_quantize(enc);
        hd_mem_update(hd_counts, label, enc);
    }
    fclose(fd);
    fclose(fl);
    hd_mem_norms(hd_counts, hd_norms);
    train_s = hd_now() - t0;

    t0 = hd_now();
    fd = hd_open(argv[3]);
    fl = hd_open(argv[4]);
    for (s = 0; s < HD_TEST_SIZE; ++s) {
        long label;
        hd_read_row(fd, argv[3], s + 1, line_buf, row);
        label = hd_read_label(fl, argv[4], s + 1);
        n_act = hd_active(row, act);
        if (n_act < HD_MIN_ACT)
            hd_data_fail(argv[3], s + 1, "too few active features");
        hd_encode(hd_bufs, row, act, n_act, lo, hi, enc);
        hd_quantize(enc);
        preds[s] = hd_mem_classify(hd_counts, hd_norms, enc);
        if (preds[s] == label)
            ++correct;
    }
    fclose(fd);
    fclose(fl);
    test_s = hd_now() - t0;

    printf("acc=%.6f\n", (double)correct / (double)HD_TEST_SIZE);
    printf("train_s=%.6f\n", train_s);
    printf("test_s=%.6f\n", test_s);
    printf("dbg:gen_s=%.6f\n", gen_s);
    printf("dbg:digest=%016llx\n", (unsigned long long)hd_digest(hd_counts));
    printf("dbg:pred=");
    for (s = 0; s < HD_TEST_SIZE; ++s) {
        if (s > 0)
            printf(",");
        printf("%ld", preds[s]);
    }
    printf("\n");
    return 0;
}
