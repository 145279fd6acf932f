__author__ = "Cho Phan <cho.phan@outlook.com>"
