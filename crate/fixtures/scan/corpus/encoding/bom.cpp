﻿#include "bom.h"
#include "after_bom.h"
