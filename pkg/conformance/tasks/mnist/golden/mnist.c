/* mnist.c
 * Self-contained hypervector classifier generated by hdc2c.
 * Description: MNIST, 64 dimensions, seed 11,
 * 32-byte vector registers.
 * Tables are rebuilt at startup from the seed; the same
 * description always reproduces this file byte for byte.
 */

#define _POSIX_C_SOURCE 199309L

#define HD_DIMENSIONS 64
#define HD_PAD_DIMS 64
#define HD_NUM_BATCH 8
#define HD_LANES 8
#define HD_VECTOR_SIZE 32
#define HD_INPUT_DIM 10
#define HD_CLASSES 3
#define HD_TRAIN_SIZE 24
#define HD_TEST_SIZE 12
#define HD_WEIGHT_ITEMS 16
#define HD_MIN_ACT 1
#define HD_INT_FEATURES 0
#define HD_ENC_BUFS 1
#define HD_PARALLEL 1
#define HD_THREADS 3

#include "hdc_runtime.h"

static int32_t *hd_tab_POSITION;
static int32_t *hd_tab_VALUE;

static void hd_setup_tables(uint64_t seed)
{
    uint64_t st;
    hd_tab_POSITION = hd_alloc((size_t)16 * HD_PAD_DIMS * sizeof(int32_t));
    st = hd_stream_state(seed, 0);
    hd_fill_level(hd_tab_POSITION, 16, &st);
    hd_tab_VALUE = hd_alloc((size_t)10 * HD_PAD_DIMS * sizeof(int32_t));
    st = hd_stream_state(seed, 1);
    hd_fill_random(hd_tab_VALUE, 10, &st);
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
    hd_vec_zero(out);
    {
        long t;
        for (t = 0; t < n_act; ++t) {
            long p = act[t];
            hd_vec_mac(out, hd_tab_VALUE + p * HD_PAD_DIMS, hd_tab_POSITION + hd_map_range(x[p], lo, hi, HD_WEIGHT_ITEMS) * HD_PAD_DIMS);
        }
    }
}

/* Threaded driver: the main thread parses and dispatches, 3
 * workers encode. Each worker owns a single-slot mailbox, so at most
 * one sample per worker is in flight and memory stays flat no matter
 * how large the data files are.
 */

#include <pthread.h>

typedef struct {
    pthread_t thread;
    pthread_mutex_t mu;
    pthread_cond_t cv;
    int state; /* 0 idle, 1 filled, 2 quit */
    int phase; /* 0 train, 1 test */
    long index;
    long label;
    long n_act;
    hd_feat_t *row;
    long *act;
    int32_t **bufs;
    int32_t *enc;
    int64_t *partial;
    long correct;
} hd_worker_t;

static hd_worker_t hd_workers[HD_THREADS];
static int64_t *hd_counts;
static double hd_norms[HD_CLASSES];
static long *hd_preds;
static double hd_arg_lo = -1.0, hd_arg_hi = 1.0;

static void *hd_worker_main(void *arg)
{
    hd_worker_t *w = arg;
    for (;;) {
        pthread_mutex_lock(&w->mu);
        while (w->state == 0)
            pthread_cond_wait(&w->cv, &w->mu);
        if (w->state == 2) {
            pthread_mutex_unlock(&w->mu);
            return NULL;
        }
        hd_encode(w->bufs, w->row, w->act, w->n_act, hd_arg_lo, hd_arg_hi, w->enc);
        hd_quantize(w->enc);
        if (w->phase == 0) {
            hd_mem_update(w->partial, w->label, w->enc);
        } else {
            long p = hd_mem_classify(hd_counts, hd_norms, w->enc);
            hd_preds[w->index] = p;
            if (p == w->label)
                ++w->correct;
        }
        w->state = 0;
        pthread_cond_signal(&w->cv);
        pthread_mutex_unlock(&w->mu);
    }
}

/* Parse one sample straight into a worker's idle slot and hand it over.
 * The slot lock is held while its row buffer is written, and only the
 * producer fills slots, so a plain state flag is enough. */
static void hd_dispatch(FILE *fd, FILE *fl, const char *dpath, const char *lpath,
                        long s, int phase, char *line_buf)
{
    hd_worker_t *w = &hd_workers[s % HD_THREADS];
    pthread_mutex_lock(&w->mu);
    while (w->state != 0)
        pthread_cond_wait(&w->cv, &w->mu);
    hd_read_row(fd, dpath, s + 1, line_buf, w->row);
    w->label = hd_read_label(fl, lpath, s + 1);
    w->n_act = hd_active(w->row, w->act);
    if (w->n_act < HD_MIN_ACT)
        hd_data_fail(dpath, s + 1, "too few active features");
    w->phase = phase;
    w->index = s;
    w->state = 1;
    pthread_cond_signal(&w->cv);
    pthread_mutex_unlock(&w->mu);
}

/* Wait until every mailbox is idle again; after this the producer owns
 * all worker results. */
static void hd_drain(void)
{
    long t;
    for (t = 0; t < HD_THREADS; ++t) {
        hd_worker_t *w = &hd_workers[t];
        pthread_mutex_lock(&w->mu);
        while (w->state != 0)
            pthread_cond_wait(&w->cv, &w->mu);
        pthread_mutex_unlock(&w->mu);
    }
}

static void hd_usage(const char *prog)
{
    fprintf(stderr,
            "usage: %s <train_data> <train_labels> <test_data> <test_labels> [min max]\n",
            prog);
}

int main(int argc, char **argv)
{
    double t0, gen_s, train_s, test_s;
    long correct = 0;
    long s, t, k;
    FILE *fd, *fl;
    char *line_buf;

    if (argc != 5 && argc != 7) {
        hd_usage(argv[0]);
        return 1;
    }
    if (argc == 7) {
        char *end;
        hd_arg_lo = strtod(argv[5], &end);
        if (*end != '\0') {
            hd_usage(argv[0]);
            return 1;
        }
        hd_arg_hi = strtod(argv[6], &end);
        if (*end != '\0' || !(hd_arg_lo < hd_arg_hi)) {
            hd_usage(argv[0]);
            return 1;
        }
    }

    t0 = hd_now();
    hd_setup_tables((uint64_t)11ULL);
    hd_counts = hd_alloc((size_t)HD_CLASSES * HD_DIMENSIONS * sizeof(int64_t));
    hd_preds = malloc((size_t)HD_TEST_SIZE * sizeof(long));
    line_buf = malloc(HD_LINE_CAP);
    if (hd_preds == NULL || line_buf == NULL) {
        fprintf(stderr, "out of memory\n");
        return 2;
    }
    for (t = 0; t < HD_THREADS; ++t) {
        hd_worker_t *w = &hd_workers[t];
        pthread_mutex_init(&w->mu, NULL);
        pthread_cond_init(&w->cv, NULL);
        w->state = 0;
        w->correct = 0;
        w->row = malloc((size_t)HD_INPUT_DIM * sizeof(hd_feat_t));
        w->act = malloc((size_t)HD_INPUT_DIM * sizeof(long));
        w->bufs = malloc((size_t)HD_ENC_BUFS * sizeof(int32_t *));
        if (w->row == NULL || w->act == NULL || w->bufs == NULL) {
            fprintf(stderr, "out of memory\n");
            return 2;
        }
        for (k = 0; k < HD_ENC_BUFS; ++k)
            w->bufs[k] = hd_alloc((size_t)HD_PAD_DIMS * sizeof(int32_t));
        w->enc = hd_alloc((size_t)HD_PAD_DIMS * sizeof(int32_t));
        w->partial = hd_alloc((size_t)HD_CLASSES * HD_DIMENSIONS * sizeof(int64_t));
        if (pthread_create(&w->thread, NULL, hd_worker_main, w) != 0) {
            fprintf(stderr, "cannot start worker thread\n");
            return 2;
        }
    }
    gen_s = hd_now() - t0;

    t0 = hd_now();
    fd = hd_open(argv[1]);
    fl = hd_open(argv[2]);
    for (s = 0; s < HD_TRAIN_SIZE; ++s)
        hd_dispatch(fd, fl, argv[1], argv[2], s, 0, line_buf);
    hd_drain();
    fclose(fd);
    fclose(fl);
    for (t = 0; t < HD_THREADS; ++t)
        hd_mem_merge(hd_counts, hd_workers[t].partial);
    hd_mem_norms(hd_counts, hd_norms);
    train_s = hd_now() - t0;

    t0 = hd_now();
    fd = hd_open(argv[3]);
    fl = hd_open(argv[4]);
    for (s = 0; s < HD_TEST_SIZE; ++s)
        hd_dispatch(fd, fl, argv[3], argv[4], s, 1, line_buf);
    hd_drain();
    fclose(fd);
    fclose(fl);
    for (t = 0; t < HD_THREADS; ++t)
        correct += hd_workers[t].correct;
    test_s = hd_now() - t0;

    for (t = 0; t < HD_THREADS; ++t) {
        hd_worker_t *w = &hd_workers[t];
        pthread_mutex_lock(&w->mu);
        w->state = 2;
        pthread_cond_signal(&w->cv);
        pthread_mutex_unlock(&w->mu);
    }
    for (t = 0; t < HD_THREADS; ++t)
        pthread_join(hd_workers[t].thread, NULL);

    printf("acc=%.6f\n", (double)correct / (double)HD_TEST_SIZE);
    printf("train_s=%.6f\n", train_s);
    printf("test_s=%.6f\n", test_s);
    printf("dbg:gen_s=%.6f\n", gen_s);
    printf("dbg:digest=%016llx\n", (unsigned long long)hd_digest(hd_counts));
    printf("dbg:pred=");
    for (s = 0; s < HD_TEST_SIZE; ++s) {
        if (s > 0)
            printf(",");
        printf("%ld", hd_preds[s]);
    }
    printf("\n");
    return 0;
}
