// comment continues \
#include "no1.h"
#include "yes1.h"
