// caf�
#include "enc.h"
