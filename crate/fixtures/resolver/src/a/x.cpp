#include "common.h"
#include <common.h>
#include "b/y.h"
#include <b/y.h>
#include "../shared/s.h"
#include "missing.h"
#include <stdio.h>
